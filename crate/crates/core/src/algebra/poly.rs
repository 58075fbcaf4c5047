//! Sparse multivariate polynomials over Q or F_p with named variables.
//!
//! Terms are kept sorted in decreasing order for the ring's monomial order
//! and never carry zero coefficients, so two polynomials over the same ring
//! are equal exactly when their term vectors are equal.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{Field, Scalar};
use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};

/// Variable dictionary, coefficient field and monomial order.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    field: Field,
    order: MonomialOrder,
}

pub fn valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S], field: Field, order: MonomialOrder) -> Result<Arc<Ring>> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            if !valid_var_name(v) {
                return Err(Error::InvalidInput(format!("bad variable name {v:?}")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate variable {v:?}")));
            }
        }
        if let MonomialOrder::Block(k) = order {
            if k > vars.len() {
                return Err(Error::InvalidInput(format!("block split {k} exceeds {} variables", vars.len())));
            }
        }
        Ok(Arc::new(Ring { vars, field, order }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// A variable name not yet in the dictionary, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        if self.var_index(base).is_none() {
            return base.to_string();
        }
        (0..).map(|k| format!("{base}{k}")).find(|n| self.var_index(n).is_none()).unwrap()
    }

    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<Ring>> {
        Ring::new(&self.vars, self.field, order)
    }

    pub fn with_field(&self, field: Field) -> Result<Arc<Ring>> {
        Ring::new(&self.vars, field, self.order)
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Ring>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl std::hash::Hash for MultiPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl MultiPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        MultiPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Self {
        let mut p = Self::zero(ring);
        if !ring.field.is_zero(&c) {
            p.terms.push((Monomial::one(ring.nvars()), c));
        }
        p
    }

    pub fn from_i64(ring: &Arc<Ring>, c: i64) -> Self {
        Self::constant(ring, ring.field.from_i64(c))
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::from_i64(ring, 1)
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.nvars(), i, 1), ring.field.one())],
        }
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Result<Self> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown variable {name:?}")))?;
        Ok(Self::var(ring, i))
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(ring);
        if !ring.field.is_zero(&c) {
            p.terms.push((m, c));
        }
        p
    }

    /// Builds a polynomial from unsorted terms, combining duplicates.
    pub fn from_terms(ring: &Arc<Ring>, terms: Vec<(Monomial, Scalar)>) -> Self {
        let field = ring.field;
        let mut map: HashMap<Monomial, Scalar> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity mismatch");
            match map.get_mut(&m) {
                Some(acc) => *acc = field.add(acc, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        let order = ring.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        MultiPoly { ring: ring.clone(), terms }
    }

    /// Terms must already be sorted decreasingly with nonzero coefficients.
    pub(crate) fn from_sorted_unchecked(ring: &Arc<Ring>, terms: Vec<(Monomial, Scalar)>) -> Self {
        MultiPoly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.field().is_one(&self.terms[0].1)
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            Some(self.field().zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    /// Indices of variables that occur in some term.
    pub fn variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.ring.nvars()];
        for (m, _) in &self.terms {
            for i in m.support() {
                used[i] = true;
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(i, _)| i).collect()
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|t| t.0.exps()[var]).max().unwrap_or(0)
    }

    fn check_ring(&self, other: &MultiPoly) {
        assert!(self.ring.same_as(&other.ring), "polynomials from different rings");
    }

    fn merge(&self, other: &MultiPoly, negate_other: bool) -> MultiPoly {
        self.check_ring(other);
        let field = self.ring.field;
        let order = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other { field.neg(&b[j].1) } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        field.sub(&a[i].1, &b[j].1)
                    } else {
                        field.add(&a[i].1, &b[j].1)
                    };
                    if !field.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate_other { field.neg(&t.1) } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        MultiPoly { ring: self.ring.clone(), terms: out }
    }

    /// `self - c * m * g`, the workhorse of reduction.
    pub fn sub_mul_term(&self, c: &Scalar, m: &Monomial, g: &MultiPoly) -> MultiPoly {
        self.check_ring(g);
        let field = self.ring.field;
        let order = self.ring.order;
        let a = &self.terms;
        let mut out = Vec::with_capacity(a.len() + g.terms.len());
        let mut i = 0;
        for (gm, gc) in &g.terms {
            let bm = gm.mul(m);
            let bc = field.neg(&field.mul(gc, c));
            loop {
                if i < a.len() {
                    match order.cmp(&a[i].0, &bm) {
                        Ordering::Greater => {
                            out.push(a[i].clone());
                            i += 1;
                            continue;
                        }
                        Ordering::Equal => {
                            let s = field.add(&a[i].1, &bc);
                            if !field.is_zero(&s) {
                                out.push((bm, s));
                            }
                            i += 1;
                            break;
                        }
                        Ordering::Less => {}
                    }
                }
                out.push((bm, bc));
                break;
            }
        }
        out.extend(a[i..].iter().cloned());
        MultiPoly { ring: self.ring.clone(), terms: out }
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        let field = self.ring.field;
        if field.is_zero(c) {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), field.mul(a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect(),
        }
    }

    /// Divides by the leading coefficient. The zero polynomial is returned as is.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.field().inv(lc).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> MultiPoly {
        let field = self.ring.field;
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[var] -= 1;
            let nc = field.mul(c, &field.from_i64(e as i64));
            if !field.is_zero(&nc) {
                terms.push((Monomial::from_exps(&exps), nc));
            }
        }
        // decrementing one exponent can reorder terms under grevlex, so re-sort
        MultiPoly::from_terms(&self.ring, terms)
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.ring.nvars());
        let field = self.ring.field;
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    v = field.mul(&v, &field.pow(&point[i], e as u64));
                }
            }
            acc = field.add(&acc, &v);
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`. Images live in `target`;
    /// variables mapped to `None` stay as the same-named variable of `target`.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[Option<MultiPoly>]) -> Result<MultiPoly> {
        assert_eq!(images.len(), self.ring.nvars());
        if self.field() != target.field() {
            return Err(Error::InvalidInput("substitution across fields".into()));
        }
        let mut resolved: Vec<MultiPoly> = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            match img {
                Some(p) => {
                    if !p.ring.same_as(target) {
                        return Err(Error::InvalidInput("image polynomial in wrong ring".into()));
                    }
                    resolved.push(p.clone());
                }
                None => resolved.push(MultiPoly::var_named(target, &self.ring.vars[i])?),
            }
        }
        let mut powers: HashMap<(usize, u16), MultiPoly> = HashMap::new();
        let mut acc = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers.entry((i, e)).or_insert_with(|| resolved[i].pow(e as u32));
                t = &t * &*pw;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Moves the polynomial into `target`, matching variables by name.
    pub fn to_ring(&self, target: &Arc<Ring>) -> Result<MultiPoly> {
        if self.ring.same_as(target) {
            return Ok(MultiPoly { ring: target.clone(), terms: self.terms.clone() });
        }
        let mut idx = Vec::with_capacity(self.ring.nvars());
        for v in &self.ring.vars {
            idx.push(target.var_index(v));
        }
        let field = target.field;
        let n = target.nvars();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; n];
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match idx[i] {
                    Some(j) => exps[j] = e,
                    None => {
                        return Err(Error::InvalidInput(format!(
                            "variable {} missing from target ring",
                            self.ring.vars[i]
                        )))
                    }
                }
            }
            let c = if self.field() == field {
                c.clone()
            } else {
                field.from_rational(&self.field().to_rational(c))?
            };
            terms.push((Monomial::from_exps(&exps), c));
        }
        Ok(MultiPoly::from_terms(target, terms))
    }
}

impl<'a> std::ops::Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.merge(rhs, false)
    }
}

impl<'a> std::ops::Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.merge(rhs, true)
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let field = self.field();
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect(),
        }
    }
}

impl<'a> std::ops::Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_ring(rhs);
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        let (small, big) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return big.mul_monomial(m).scale(c);
        }
        let field = self.field();
        let mut terms = Vec::with_capacity(self.len() * rhs.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                terms.push((ma.mul(mb), field.mul(ca, cb)));
            }
        }
        MultiPoly::from_terms(&self.ring, terms)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let field = self.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let q = field.to_rational(c);
            let neg = q.is_negative();
            let mag = q.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(fmt_rational(&mag));
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars[i], e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// text grammar: sums of products of rationals, variables, powers, parentheses

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<Ring>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = MultiPoly::zero(self.ring);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            let t = self.product()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            first = false;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.power()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut q = BigRational::from_integer(num);
                // a '/' directly after an integer literal forms a rational literal
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    q = BigRational::new(q.numer().clone(), den);
                }
                let c = self.ring.field().from_rational(&q)?;
                Ok(MultiPoly::constant(self.ring, c))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                MultiPoly::var_named(self.ring, name).map_err(|_| Error::Parse(format!("unknown variable {name:?}")))
            }
            Some(c) => Err(self.err(&format!("unexpected character {:?}", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

impl Ring {
    /// Parses text such as `3/2*Pi0_1_2^2*t - 1`.
    pub fn parse(self: &Arc<Self>, text: &str) -> Result<MultiPoly> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, ring: self };
        if p.peek().is_none() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str]) -> Arc<Ring> {
        Ring::new(vars, Field::Rational, MonomialOrder::GrevLex).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let r = ring(&["Pi0_1_2", "t"]);
        let p = r.parse("3/2*Pi0_1_2^2*t - 1").unwrap();
        assert_eq!(p.to_string(), "3/2*Pi0_1_2^2*t - 1");
        let q = r.parse("(t + 1)^2 - t^2 - 2*t").unwrap();
        assert!(q.is_one());
    }

    #[test]
    fn parse_errors() {
        let r = ring(&["x"]);
        assert!(r.parse("y").is_err());
        assert!(r.parse("x +").is_err());
        assert!(r.parse("1/0").is_err());
        assert!(r.parse("").is_err());
    }

    #[test]
    fn rejects_bad_names() {
        assert!(Ring::new(&["1x"], Field::Rational, MonomialOrder::GrevLex).is_err());
        assert!(Ring::new(&["x", "x"], Field::Rational, MonomialOrder::GrevLex).is_err());
    }

    #[test]
    fn derivative_product_rule() {
        let r = ring(&["x", "y", "t"]);
        let f = r.parse("x*y - t").unwrap();
        let d: Vec<String> = (0..3).map(|i| f.derivative(i).to_string()).collect();
        assert_eq!(d, vec!["y", "x", "-1"]);
        assert_eq!(r.parse("x^2").unwrap().derivative(0).to_string(), "2*x");
    }

    #[test]
    fn prime_field_printing_is_symmetric() {
        let r = Ring::new(&["x"], Field::Prime(5), MonomialOrder::GrevLex).unwrap();
        let p = r.parse("4*x + 2").unwrap();
        assert_eq!(p.to_string(), "-x + 2");
        assert_eq!(r.parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn substitution() {
        let r = ring(&["x", "y"]);
        let f = r.parse("x^2 - y").unwrap();
        let img = r.parse("y + 1").unwrap();
        let g = f.substitute(&r, &[Some(img), None]).unwrap();
        assert_eq!(g, r.parse("y^2 + y + 1").unwrap());
    }

    #[test]
    fn sub_mul_term_matches_naive() {
        let r = ring(&["x", "y", "z"]);
        let f = r.parse("x^3 + 2*x*y*z - z^2 + 5").unwrap();
        let g = r.parse("x*y - z + 1").unwrap();
        let m = Monomial::from_exps(&[1, 0, 1]);
        let c = Field::Rational.from_i64(3);
        let expect = &f - &g.mul_monomial(&m).scale(&c);
        assert_eq!(f.sub_mul_term(&c, &m, &g), expect);
    }
}
