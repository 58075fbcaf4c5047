//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

pub type Exps = SmallVec<[u16; 24]>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Exps,
    deg: u32,
    mask: u64,
}

fn mask_of(exps: &[u16]) -> u64 {
    let mut m = 0u64;
    for (i, &e) in exps.iter().enumerate() {
        if e != 0 {
            m |= 1 << (i % 64);
        }
    }
    m
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: SmallVec::from_elem(0, nvars), deg: 0, mask: 0 }
    }

    pub fn var(nvars: usize, i: usize, e: u16) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = e;
        m.deg = e as u32;
        m.mask = mask_of(&m.exps);
        m
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial {
            exps: SmallVec::from_slice(exps),
            deg: exps.iter().map(|&e| e as u32).sum(),
            mask: mask_of(exps),
        }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// Bit i (mod 64) is set when variable i occurs.
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { exps, deg: self.deg + other.deg, mask: self.mask | other.mask }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        if self.mask & !other.mask != 0 || self.deg > other.deg {
            return false;
        }
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps: Exps = other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect();
        Monomial { deg: other.deg - self.deg, mask: mask_of(&exps), exps }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Exps = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        Monomial { deg: exps.iter().map(|&e| e as u32).sum(), mask: self.mask | other.mask, exps }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        if self.mask & other.mask == 0 {
            return true;
        }
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables occurring with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

/// Monomial orders. `Block(k)` is an elimination order: the first `k`
/// variables are compared first by grevlex, ties broken by grevlex on the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    Block(usize),
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::GrevLex => {
                match a.deg.cmp(&b.deg) {
                    Ordering::Equal => {}
                    o => return o,
                }
                for i in (0..a.exps.len()).rev() {
                    match a.exps[i].cmp(&b.exps[i]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block(k) => {
                let k = (*k).min(a.exps.len());
                match grevlex(&a.exps[..k], &b.exps[..k]) {
                    Ordering::Equal => grevlex(&a.exps[k..], &b.exps[k..]),
                    o => o,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_breaks_ties_on_last_variable() {
        // x*z < y^2 in grevlex with x > y > z
        let xz = Monomial::from_exps(&[1, 0, 1]);
        let yy = Monomial::from_exps(&[0, 2, 0]);
        assert_eq!(MonomialOrder::GrevLex.cmp(&xz, &yy), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&xz, &yy), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let z = Monomial::from_exps(&[1, 0, 0]);
        let big = Monomial::from_exps(&[0, 5, 5]);
        assert_eq!(MonomialOrder::Block(1).cmp(&z, &big), Ordering::Greater);
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = Monomial::from_exps(&[1, 2, 0]);
        let b = Monomial::from_exps(&[2, 2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.quotient_of(&b).exps(), &[1, 0, 1]);
        assert_eq!(a.lcm(&Monomial::from_exps(&[0, 3, 1])).exps(), &[1, 3, 1]);
        assert!(Monomial::from_exps(&[1, 0, 0]).coprime(&Monomial::from_exps(&[0, 1, 1])));
    }
}
