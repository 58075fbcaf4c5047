//! Polynomial ideals with a lazily computed reduced Gröbner basis.

use std::fmt;
use std::sync::{Arc, OnceLock};

use super::groebner::{groebner_basis, normal_form, GroebnerConfig};
use super::monomial::MonomialOrder;
use super::poly::{MultiPoly, Ring};
use crate::error::{Error, Result};

pub struct PolyIdeal {
    ring: Arc<Ring>,
    gens: Vec<MultiPoly>,
    config: GroebnerConfig,
    basis: OnceLock<Arc<Vec<MultiPoly>>>,
}

impl Clone for PolyIdeal {
    fn clone(&self) -> Self {
        let basis = OnceLock::new();
        if let Some(b) = self.basis.get() {
            let _ = basis.set(b.clone());
        }
        PolyIdeal { ring: self.ring.clone(), gens: self.gens.clone(), config: self.config, basis }
    }
}

impl fmt::Debug for PolyIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        f.debug_struct("PolyIdeal").field("vars", &self.ring.vars()).field("gens", &gens).finish()
    }
}

impl PolyIdeal {
    pub fn new(ring: &Arc<Ring>, gens: Vec<MultiPoly>) -> Result<PolyIdeal> {
        for g in &gens {
            if !g.ring().same_as(ring) {
                return Err(Error::InvalidInput("generator from a different ring".into()));
            }
        }
        Ok(PolyIdeal { ring: ring.clone(), gens, config: GroebnerConfig::default(), basis: OnceLock::new() })
    }

    pub fn parse<S: AsRef<str>>(ring: &Arc<Ring>, gens: &[S]) -> Result<PolyIdeal> {
        let gens = gens.iter().map(|s| ring.parse(s.as_ref())).collect::<Result<Vec<_>>>()?;
        PolyIdeal::new(ring, gens)
    }

    pub fn with_config(mut self, config: GroebnerConfig) -> PolyIdeal {
        self.config = config;
        self
    }

    pub fn config(&self) -> GroebnerConfig {
        self.config
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    /// Reduced Gröbner basis, computed once and cached.
    pub fn basis(&self) -> Result<Arc<Vec<MultiPoly>>> {
        if let Some(b) = self.basis.get() {
            return Ok(b.clone());
        }
        let b = Arc::new(groebner_basis(&self.gens, &self.config)?);
        let _ = self.basis.set(b.clone());
        Ok(b)
    }

    pub fn cached_basis(&self) -> Option<&Arc<Vec<MultiPoly>>> {
        self.basis.get()
    }

    /// The same ideal with its reduced basis cached.
    pub fn groebner(&self) -> Result<PolyIdeal> {
        self.basis()?;
        Ok(self.clone())
    }

    /// The ideal generated by the reduced basis itself.
    pub fn reduced(&self) -> Result<PolyIdeal> {
        let b = self.basis()?;
        let out = PolyIdeal::new(&self.ring, b.as_ref().clone())?.with_config(self.config);
        let _ = out.basis.set(b);
        Ok(out)
    }

    pub fn contains_one(&self) -> Result<bool> {
        let b = self.basis()?;
        Ok(b.len() == 1 && b[0].is_one())
    }

    pub fn reduce(&self, f: &MultiPoly) -> Result<MultiPoly> {
        let b = self.basis()?;
        Ok(normal_form(&f.to_ring(&self.ring)?, &b))
    }

    pub fn contains(&self, f: &MultiPoly) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &PolyIdeal) -> Result<bool> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of ideals, decided by comparing reduced bases.
    pub fn same_ideal(&self, other: &PolyIdeal) -> Result<bool> {
        if !self.ring.same_as(&other.ring) {
            return Err(Error::InvalidInput("comparing ideals of different rings".into()));
        }
        Ok(*self.basis()? == *other.basis()?)
    }

    pub fn with_generators(&self, extra: Vec<MultiPoly>) -> Result<PolyIdeal> {
        let mut gens = self.gens.clone();
        for g in extra {
            gens.push(g.to_ring(&self.ring)?);
        }
        Ok(PolyIdeal::new(&self.ring, gens)?.with_config(self.config))
    }

    /// Moves the generators into a ring containing all of this ring's variables.
    pub fn in_ring(&self, target: &Arc<Ring>) -> Result<PolyIdeal> {
        let gens = self.gens.iter().map(|g| g.to_ring(target)).collect::<Result<Vec<_>>>()?;
        Ok(PolyIdeal::new(target, gens)?.with_config(self.config))
    }

    /// Krull dimension of the quotient ring, i.e. of the affine vanishing set
    /// over the algebraic closure; `-1` for the unit ideal.
    pub fn dimension(&self) -> Result<i64> {
        let b = self.basis()?;
        if b.len() == 1 && b[0].is_one() {
            return Ok(-1);
        }
        let n = self.ring.nvars();
        let supports = b
            .iter()
            .map(|p| p.leading_monomial().unwrap().support().collect::<Vec<usize>>())
            .collect::<Vec<_>>();
        Ok((n - min_hitting_set(n, &supports)?) as i64)
    }

    /// `(I : f^∞)` via an auxiliary inverse `z` of `f` and elimination of `z`.
    pub fn saturate(&self, f: &MultiPoly) -> Result<PolyIdeal> {
        let f = f.to_ring(&self.ring)?;
        if f.is_zero() {
            // every element is killed by a power of zero
            return PolyIdeal::new(&self.ring, vec![MultiPoly::one(&self.ring)]);
        }
        let z = self.ring.fresh_name("zSat");
        let mut vars = vec![z.clone()];
        vars.extend(self.ring.vars().iter().cloned());
        let big = Ring::new(&vars, self.ring.field(), MonomialOrder::Block(1))?;
        let mut gens = self.gens.iter().map(|g| g.to_ring(&big)).collect::<Result<Vec<_>>>()?;
        let zf = &MultiPoly::var(&big, 0) * &f.to_ring(&big)?;
        gens.push(&zf - &MultiPoly::one(&big));
        let elim = PolyIdeal::new(&big, gens)?.with_config(self.config);
        let b = elim.basis()?;
        let kept = b
            .iter()
            .filter(|p| p.degree_in(0) == 0)
            .map(|p| p.to_ring(&self.ring))
            .collect::<Result<Vec<_>>>()?;
        let out = PolyIdeal::new(&self.ring, kept)?.with_config(self.config);
        out.basis()?;
        Ok(out)
    }

    /// Generators of `I ∩ k[remaining variables]`, as an ideal of the smaller ring.
    pub fn eliminate(&self, drop: &[&str]) -> Result<PolyIdeal> {
        for d in drop {
            if self.ring.var_index(d).is_none() {
                return Err(Error::InvalidInput(format!("unknown variable {d:?}")));
            }
        }
        let mut vars: Vec<String> = drop.iter().map(|s| s.to_string()).collect();
        let rest: Vec<String> =
            self.ring.vars().iter().filter(|v| !drop.contains(&v.as_str())).cloned().collect();
        vars.extend(rest.iter().cloned());
        let big = Ring::new(&vars, self.ring.field(), MonomialOrder::Block(drop.len()))?;
        let elim = self.in_ring(&big)?;
        let b = elim.basis()?;
        let small = Ring::new(&rest, self.ring.field(), self.ring.order())?;
        let kept = b
            .iter()
            .filter(|p| (0..drop.len()).all(|i| p.degree_in(i) == 0))
            .map(|p| p.to_ring(&small))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyIdeal::new(&small, kept)?.with_config(self.config))
    }

    /// `I ∩ J` by the usual `s·I + (1-s)·J` elimination.
    pub fn intersect(&self, other: &PolyIdeal) -> Result<PolyIdeal> {
        let s = self.ring.fresh_name("sInt");
        let mut vars = vec![s.clone()];
        vars.extend(self.ring.vars().iter().cloned());
        let big = Ring::new(&vars, self.ring.field(), MonomialOrder::Block(1))?;
        let sv = MultiPoly::var(&big, 0);
        let one_minus = &MultiPoly::one(&big) - &sv;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&sv * &g.to_ring(&big)?);
        }
        for g in &other.gens {
            gens.push(&one_minus * &g.to_ring(&big)?);
        }
        let b = PolyIdeal::new(&big, gens)?.with_config(self.config).basis()?;
        let kept = b
            .iter()
            .filter(|p| p.degree_in(0) == 0)
            .map(|p| p.to_ring(&self.ring))
            .collect::<Result<Vec<_>>>()?;
        PolyIdeal::new(&self.ring, kept).map(|i| i.with_config(self.config))
    }

    /// The colon ideal `(I : f)`.
    pub fn quotient(&self, f: &MultiPoly) -> Result<PolyIdeal> {
        let f = f.to_ring(&self.ring)?;
        if f.is_zero() {
            return PolyIdeal::new(&self.ring, vec![MultiPoly::one(&self.ring)]);
        }
        let principal = PolyIdeal::new(&self.ring, vec![f.clone()])?;
        let meet = self.intersect(&principal)?;
        let mut gens = Vec::new();
        for g in meet.gens() {
            let q = g
                .div_exact(&f)
                .ok_or_else(|| Error::Inconsistent("element of I ∩ (f) not divisible by f".into()))?;
            gens.push(q);
        }
        PolyIdeal::new(&self.ring, gens).map(|i| i.with_config(self.config))
    }
}

/// Size of a smallest variable set meeting every support set; the complement
/// of such a set is a maximal independent set modulo the leading-term ideal.
pub fn min_hitting_set(nvars: usize, supports: &[Vec<usize>]) -> Result<usize> {
    if nvars > 128 {
        return Err(Error::InvalidInput("dimension supports at most 128 variables".into()));
    }
    let mut sets: Vec<u128> = supports
        .iter()
        .map(|s| s.iter().fold(0u128, |acc, &i| acc | (1u128 << i)))
        .collect();
    if sets.contains(&0) {
        // a nonzero constant leading term: no independent variables and no points
        return Ok(nvars);
    }
    sets.sort_by_key(|s| s.count_ones());
    sets.dedup();
    let minimal: Vec<u128> = sets
        .iter()
        .enumerate()
        .filter(|(i, s)| !sets[..*i].iter().any(|t| *t & **s == *t && *t != **s))
        .map(|(_, s)| *s)
        .collect();
    let mut best = nvars;
    search_hitting(&minimal, 0, 0, &mut best);
    Ok(best)
}

fn search_hitting(sets: &[u128], chosen: u128, size: usize, best: &mut usize) {
    if size >= *best {
        return;
    }
    let unhit = sets.iter().filter(|&&s| s & chosen == 0);
    let Some(&branch) = unhit.min_by_key(|s| s.count_ones()) else {
        *best = size;
        return;
    };
    let mut bits = branch;
    while bits != 0 {
        let v = bits.trailing_zeros();
        bits &= bits - 1;
        search_hitting(sets, chosen | (1u128 << v), size + 1, best);
    }
}

impl MultiPoly {
    /// Exact quotient `self / f`, or `None` when `f` does not divide `self`.
    pub fn div_exact(&self, f: &MultiPoly) -> Option<MultiPoly> {
        if f.is_zero() {
            return None;
        }
        let field = self.field();
        let lm = f.leading_monomial().unwrap();
        let lc = f.leading_coeff().unwrap();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.ring());
        while let Some(m) = rem.leading_monomial() {
            if !lm.divides(m) {
                return None;
            }
            let q = lm.quotient_of(m);
            let c = field.div(rem.leading_coeff().unwrap(), lc).unwrap();
            quot = &quot + &MultiPoly::monomial(self.ring(), q.clone(), c.clone());
            rem = rem.sub_mul_term(&c, &q, f);
        }
        Some(quot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;

    fn ring(vars: &[&str]) -> Arc<Ring> {
        Ring::new(vars, Field::Rational, MonomialOrder::GrevLex).unwrap()
    }

    fn ideal(r: &Arc<Ring>, gens: &[&str]) -> PolyIdeal {
        PolyIdeal::parse(r, gens).unwrap()
    }

    fn basis_strings(i: &PolyIdeal) -> Vec<String> {
        i.basis().unwrap().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn contains_one_examples() {
        let r = ring(&["x", "y"]);
        assert!(!ideal(&r, &["x", "y"]).contains_one().unwrap());
        assert!(ideal(&r, &["x", "1 - x"]).contains_one().unwrap());
    }

    #[test]
    fn dimension_examples() {
        let r = ring(&["x", "y"]);
        assert_eq!(ideal(&r, &["x*y"]).dimension().unwrap(), 1);
        assert_eq!(PolyIdeal::new(&r, vec![]).unwrap().dimension().unwrap(), 2);
        assert_eq!(ideal(&r, &["x^2 + y^2 - 1"]).dimension().unwrap(), 1);
        assert_eq!(ideal(&r, &["x", "1 - x"]).dimension().unwrap(), -1);
        assert_eq!(ideal(&r, &["x", "y"]).dimension().unwrap(), 0);
    }

    #[test]
    fn saturation_examples() {
        let r = ring(&["x", "y"]);
        let x = r.parse("x").unwrap();
        assert_eq!(basis_strings(&ideal(&r, &["x*y"]).saturate(&x).unwrap()), vec!["y"]);
        assert_eq!(basis_strings(&ideal(&r, &["y"]).saturate(&x).unwrap()), vec!["y"]);
        assert_eq!(basis_strings(&ideal(&r, &["x^2"]).saturate(&x).unwrap()), vec!["1"]);
    }

    #[test]
    fn saturation_is_idempotent() {
        let r = ring(&["x", "y", "t"]);
        let t = r.parse("t").unwrap();
        let i = ideal(&r, &["t*x^2 - t*y", "t^2*y"]);
        let s1 = i.saturate(&t).unwrap();
        let s2 = s1.saturate(&t).unwrap();
        assert!(s1.same_ideal(&s2).unwrap());
    }

    #[test]
    fn colon_and_intersection() {
        let r = ring(&["x", "y"]);
        let i = ideal(&r, &["x*y", "y^2"]);
        let q = i.quotient(&r.parse("y").unwrap()).unwrap();
        assert_eq!(basis_strings(&q), vec!["y", "x"]);
        let a = ideal(&r, &["x"]);
        let b = ideal(&r, &["y"]);
        assert_eq!(basis_strings(&a.intersect(&b).unwrap()), vec!["x*y"]);
    }

    #[test]
    fn elimination_projects() {
        let r = ring(&["t", "x", "y"]);
        // parametrized parabola (t, t^2)
        let i = ideal(&r, &["x - t", "y - t^2"]);
        let e = i.eliminate(&["t"]).unwrap();
        assert_eq!(basis_strings(&e), vec!["x^2 - y"]);
    }

    #[test]
    fn exact_division() {
        let r = ring(&["x", "y"]);
        let f = r.parse("x^2 - y^2").unwrap();
        let g = r.parse("x - y").unwrap();
        assert_eq!(f.div_exact(&g).unwrap(), r.parse("x + y").unwrap());
        assert!(f.div_exact(&r.parse("x").unwrap()).is_none());
    }
}
