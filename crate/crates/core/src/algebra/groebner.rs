//! Buchberger's algorithm with the Gebauer–Möller pair criteria and the
//! sugar selection strategy, producing reduced Gröbner bases.

use std::cmp::Ordering;

use super::field::Scalar;
use super::monomial::Monomial;
use super::poly::MultiPoly;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_PAIRS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerConfig {
    /// Cap on the number of pending critical pairs.
    pub max_pairs: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig { max_pairs: DEFAULT_MAX_PAIRS }
    }
}

fn sub_mul_term_slice(p: &MultiPoly, start: usize, c: &Scalar, m: &Monomial, g: &MultiPoly) -> MultiPoly {
    if start == 0 {
        return p.sub_mul_term(c, m, g);
    }
    let tail = MultiPoly::from_sorted_unchecked(p.ring(), p.terms()[start..].to_vec());
    tail.sub_mul_term(c, m, g)
}

fn find_reducer<'a>(m: &Monomial, reducers: &[&'a MultiPoly]) -> Option<&'a MultiPoly> {
    reducers
        .iter()
        .find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(m)))
        .copied()
}

/// Full normal form of `f` with respect to `reducers` (all terms reduced).
pub fn normal_form_refs(f: &MultiPoly, reducers: &[&MultiPoly]) -> MultiPoly {
    let field = f.field();
    let mut p = f.clone();
    let mut start = 0usize;
    let mut rem: Vec<(Monomial, Scalar)> = Vec::new();
    while start < p.len() {
        let (m, c) = &p.terms()[start];
        match find_reducer(m, reducers) {
            Some(g) => {
                let lm = g.leading_monomial().unwrap();
                let q = lm.quotient_of(m);
                let coef = field.div(c, g.leading_coeff().unwrap()).unwrap();
                p = sub_mul_term_slice(&p, start, &coef, &q, g);
                start = 0;
            }
            None => {
                rem.push((m.clone(), c.clone()));
                start += 1;
            }
        }
    }
    // remainder terms were emitted in decreasing order
    MultiPoly::from_sorted_unchecked(f.ring(), rem)
}

pub fn normal_form(f: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let refs: Vec<&MultiPoly> = basis.iter().collect();
    normal_form_refs(f, &refs)
}

pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let field = f.field();
    let (lf, lg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = lf.lcm(lg);
    let a = f.mul_monomial(&lf.quotient_of(&l)).scale(&field.inv(f.leading_coeff().unwrap()).unwrap());
    let b = g.mul_monomial(&lg.quotient_of(&l)).scale(&field.inv(g.leading_coeff().unwrap()).unwrap());
    &a - &b
}

struct Elem {
    poly: MultiPoly,
    lm: Monomial,
    sugar: u32,
    active: bool,
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

fn pair_sugar(a: &Elem, b: &Elem, lcm: &Monomial) -> u32 {
    let sa = a.sugar + lcm.degree() - a.lm.degree();
    let sb = b.sugar + lcm.degree() - b.lm.degree();
    sa.max(sb)
}

/// Gebauer–Möller update after appending basis element `k`.
fn update(basis: &mut [Elem], pairs: &mut Vec<Pair>, k: usize) {
    let hk = &basis[k].lm.clone();
    let mut cand: Vec<(usize, Monomial, bool)> = basis[..k]
        .iter()
        .enumerate()
        .filter(|(_, e)| e.active)
        .map(|(i, e)| (i, e.lm.lcm(hk), e.lm.coprime(hk)))
        .collect();

    // criterion M / F: keep a pair only if no other new pair's lcm divides it
    // (ties resolved in favour of coprime pairs, then lower index)
    let mut keep = vec![true; cand.len()];
    for a in 0..cand.len() {
        for b in 0..cand.len() {
            if a == b || !keep[b] {
                continue;
            }
            let (la, lb) = (&cand[a].1, &cand[b].1);
            if lb.divides(la) {
                if la == lb {
                    // equal lcms: prefer the coprime one, else the earlier one
                    if cand[a].2 && !cand[b].2 {
                        continue;
                    }
                    if cand[a].2 == cand[b].2 && a < b {
                        continue;
                    }
                }
                keep[a] = false;
                break;
            }
        }
    }
    let mut new_pairs = Vec::new();
    for (idx, (i, l, coprime)) in cand.drain(..).enumerate() {
        if !keep[idx] || coprime {
            continue;
        }
        let sugar = pair_sugar(&basis[i], &basis[k], &l);
        new_pairs.push(Pair { i, j: k, lcm: l, sugar });
    }

    // criterion B on old pairs
    pairs.retain(|p| {
        if !hk.divides(&p.lcm) {
            return true;
        }
        let li = basis[p.i].lm.lcm(hk);
        let lj = basis[p.j].lm.lcm(hk);
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(new_pairs);

    for e in basis[..k].iter_mut() {
        if e.active && hk.divides(&e.lm) {
            e.active = false;
        }
    }
}

fn select(pairs: &mut Vec<Pair>, order: super::monomial::MonomialOrder) -> Pair {
    let mut best = 0;
    for idx in 1..pairs.len() {
        let (a, b) = (&pairs[idx], &pairs[best]);
        let better = match a.sugar.cmp(&b.sugar) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => order.cmp(&a.lcm, &b.lcm) == Ordering::Less,
        };
        if better {
            best = idx;
        }
    }
    pairs.swap_remove(best)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, monic and sorted by
/// increasing leading monomial. The zero ideal yields an empty basis.
pub fn groebner_basis(gens: &[MultiPoly], cfg: &GroebnerConfig) -> Result<Vec<MultiPoly>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let ring = first.ring().clone();
    let order = ring.order();
    let mut basis: Vec<Elem> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    // seed with the inter-reduced generators, smallest leading monomial first
    let mut input: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    input.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    for g in input {
        let reducers: Vec<&MultiPoly> = basis.iter().filter(|e| e.active).map(|e| &e.poly).collect();
        let h = normal_form_refs(&g, &reducers);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![MultiPoly::one(&ring)]);
        }
        let h = h.monic();
        let lm = h.leading_monomial().unwrap().clone();
        let sugar = h.total_degree();
        basis.push(Elem { poly: h, lm, sugar, active: true });
        let k = basis.len() - 1;
        update(&mut basis, &mut pairs, k);
    }

    while !pairs.is_empty() {
        if pairs.len() > cfg.max_pairs {
            return Err(Error::ResourceLimit { pairs: pairs.len(), cap: cfg.max_pairs });
        }
        let pair = select(&mut pairs, order);
        let s = s_polynomial(&basis[pair.i].poly, &basis[pair.j].poly);
        let reducers: Vec<&MultiPoly> = basis.iter().filter(|e| e.active).map(|e| &e.poly).collect();
        let h = normal_form_refs(&s, &reducers);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![MultiPoly::one(&ring)]);
        }
        let h = h.monic();
        let lm = h.leading_monomial().unwrap().clone();
        let sugar = pair.sugar.max(h.total_degree());
        basis.push(Elem { poly: h, lm, sugar, active: true });
        let k = basis.len() - 1;
        update(&mut basis, &mut pairs, k);
    }

    Ok(interreduce(basis.into_iter().filter(|e| e.active).map(|e| e.poly).collect()))
}

/// Turns a Gröbner basis into the reduced one: drops redundant leading
/// monomials, tail-reduces, normalizes and sorts.
pub fn interreduce(mut polys: Vec<MultiPoly>) -> Vec<MultiPoly> {
    polys.retain(|p| !p.is_zero());
    if polys.is_empty() {
        return polys;
    }
    let order = polys[0].ring().order();
    polys.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for p in polys {
        let lm = p.leading_monomial().unwrap();
        if !minimal.iter().any(|q| q.leading_monomial().unwrap().divides(lm)) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&MultiPoly> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q).collect();
        out.push(normal_form_refs(&minimal[i], &others).monic());
    }
    out.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    out
}

/// True when every S-polynomial of `basis` reduces to zero.
pub fn is_groebner(basis: &[MultiPoly]) -> bool {
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let s = s_polynomial(&basis[i], &basis[j]);
            if !normal_form(&s, basis).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;
    use crate::algebra::monomial::MonomialOrder;
    use crate::algebra::poly::Ring;

    fn gb(vars: &[&str], field: Field, gens: &[&str]) -> Vec<String> {
        let r = Ring::new(vars, field, MonomialOrder::GrevLex).unwrap();
        let g: Vec<_> = gens.iter().map(|s| r.parse(s).unwrap()).collect();
        groebner_basis(&g, &GroebnerConfig::default()).unwrap().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn unit_ideals() {
        assert_eq!(gb(&["x"], Field::Rational, &["x", "1 - x"]), vec!["1"]);
        assert_eq!(gb(&["x", "y"], Field::Rational, &["x*y - 1", "x"]), vec!["1"]);
    }

    #[test]
    fn already_reduced() {
        assert_eq!(gb(&["x"], Field::Rational, &["x^2"]), vec!["x^2"]);
    }

    #[test]
    fn twisted_cubic() {
        // ideal of the twisted cubic: 3 quadrics
        let b = gb(&["x", "y", "z", "w"], Field::Rational, &["x*z - y^2", "y*w - z^2", "x*w - y*z"]);
        assert_eq!(b.len(), 3);
        let r = Ring::new(&["x", "y", "z", "w"], Field::Rational, MonomialOrder::GrevLex).unwrap();
        let basis: Vec<_> = b.iter().map(|s| r.parse(s).unwrap()).collect();
        assert!(is_groebner(&basis));
    }

    #[test]
    fn lex_elimination_of_circle_and_line() {
        let r = Ring::new(&["x", "y"], Field::Rational, MonomialOrder::Lex).unwrap();
        let g = vec![r.parse("x^2 + y^2 - 1").unwrap(), r.parse("x - y").unwrap()];
        let b = groebner_basis(&g, &GroebnerConfig::default()).unwrap();
        let s: Vec<String> = b.iter().map(|p| p.to_string()).collect();
        assert_eq!(s, vec!["y^2 - 1/2", "x - y"]);
    }

    #[test]
    fn resource_guard_trips() {
        let r = Ring::new(&["a", "b", "c", "d"], Field::Prime(32003), MonomialOrder::GrevLex).unwrap();
        let g: Vec<_> = ["a+b+c+d", "a*b+b*c+c*d+d*a", "a*b*c+b*c*d+c*d*a+d*a*b", "a*b*c*d-1"]
            .iter()
            .map(|s| r.parse(s).unwrap())
            .collect();
        let err = groebner_basis(&g, &GroebnerConfig { max_pairs: 1 }).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
        let ok = groebner_basis(&g, &GroebnerConfig::default()).unwrap();
        assert!(is_groebner(&ok));
    }
}
