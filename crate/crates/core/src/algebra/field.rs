//! Coefficient fields: the rationals and prime fields F_p.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field of a polynomial ring or a numeric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

/// A field element. The field it belongs to is carried by the context
/// (ring or matrix), never by the element itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    P(u32),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Tag used by the JSON ideal format: `QQ` or `GF(p)`.
    pub fn tag(&self) -> String {
        match self {
            Field::Rational => "QQ".to_string(),
            Field::Prime(p) => format!("GF({p})"),
        }
    }

    pub fn from_tag(tag: &str) -> Result<Field> {
        let tag = tag.trim();
        if tag == "QQ" || tag == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(inner) = tag.strip_prefix("GF(").and_then(|s| s.strip_suffix(')')) {
            let p: u32 = inner
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad field tag {tag:?}")))?;
            return Field::prime(p);
        }
        Err(Error::Parse(format!("bad field tag {tag:?}")))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::zero()),
            Field::Prime(_) => Scalar::P(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::one()),
            Field::Prime(_) => Scalar::P(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::P(v.rem_euclid(*p as i64) as u32),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Scalar::P(r.to_u32().expect("residue fits"))
            }
        }
    }

    /// Maps a rational into the field; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, v: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Q(v.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(v.numer());
                let den = self.from_bigint(v.denom());
                let inv = self.inv(&den).ok_or_else(|| {
                    Error::InvalidInput(format!("denominator of {v} vanishes in {}", self.tag()))
                })?;
                Ok(self.mul(&num, &inv))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Q(q) => q.is_zero(),
            Scalar::P(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Q(q) => q.is_one(),
            Scalar::P(v) => *v == 1,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b, self) {
            (Scalar::Q(x), Scalar::Q(y), _) => Scalar::Q(x + y),
            (Scalar::P(x), Scalar::P(y), Field::Prime(p)) => {
                Scalar::P(((*x as u64 + *y as u64) % *p as u64) as u32)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b, self) {
            (Scalar::Q(x), Scalar::Q(y), _) => Scalar::Q(x - y),
            (Scalar::P(x), Scalar::P(y), Field::Prime(p)) => {
                Scalar::P(((*x as u64 + *p as u64 - *y as u64) % *p as u64) as u32)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b, self) {
            (Scalar::Q(x), Scalar::Q(y), _) => Scalar::Q(x * y),
            (Scalar::P(x), Scalar::P(y), Field::Prime(p)) => {
                Scalar::P(((*x as u64 * *y as u64) % *p as u64) as u32)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (a, self) {
            (Scalar::Q(x), _) => Scalar::Q(-x),
            (Scalar::P(x), Field::Prime(p)) => Scalar::P(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match (a, self) {
            (Scalar::Q(x), _) => Some(Scalar::Q(x.recip())),
            (Scalar::P(x), Field::Prime(p)) => {
                // extended Euclid on i64
                let (mut r0, mut r1) = (*p as i64, *x as i64);
                let (mut s0, mut s1) = (0i64, 1i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                Some(Scalar::P(s0.rem_euclid(*p as i64) as u32))
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// All elements of a prime field in the order 0, 1, ..., p-1.
    pub fn elements(&self) -> Result<Vec<Scalar>> {
        match self {
            Field::Prime(p) => Ok((0..*p).map(Scalar::P).collect()),
            Field::Rational => Err(Error::InvalidInput("the rationals are infinite".into())),
        }
    }

    /// Canonical integer lift used when printing: F_p elements use the
    /// symmetric range (-p/2, p/2].
    pub fn to_rational(&self, a: &Scalar) -> BigRational {
        match (a, self) {
            (Scalar::Q(x), _) => x.clone(),
            (Scalar::P(x), Field::Prime(p)) => {
                let v = if *x > p / 2 { *x as i64 - *p as i64 } else { *x as i64 };
                BigRational::from_integer(BigInt::from(v))
            }
            _ => panic!("scalar/field mismatch"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(x) => write!(f, "{x}"),
            Scalar::P(x) => write!(f, "{x}"),
        }
    }
}

impl Scalar {
    pub fn is_negative_lift(&self, field: &Field) -> bool {
        field.to_rational(self).is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(7).unwrap();
        for v in 1..7 {
            let a = f.from_i64(v);
            let b = f.inv(&a).unwrap();
            assert!(f.is_one(&f.mul(&a, &b)));
        }
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(6).is_err());
        assert!(Field::prime(1).is_err());
    }

    #[test]
    fn rational_into_prime_field() {
        let f = Field::prime(5).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half).unwrap(), Scalar::P(3));
        let fifth = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert!(f.from_rational(&fifth).is_err());
    }

    #[test]
    fn tags_round_trip() {
        for f in [Field::Rational, Field::Prime(32003)] {
            assert_eq!(Field::from_tag(&f.tag()).unwrap(), f);
        }
    }
}
