//! Certificates and oracles: Jacobian smoothness, exhaustive point counts,
//! subspace enumeration, and the check suite.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::matrix::{jacobian, subsets};
use crate::algebra::{Field, FieldMatrix, GroebnerConfig, MultiPoly, PolyIdeal, PolyMatrix, Ring, Scalar};
use crate::error::{Error, Result};
use crate::resolution;
use crate::schemes::{self, ChainSpec, ChartIdeal, VarRole};
use crate::toric::{self, CharacterData};

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothMethod {
    /// Gröbner basis of I + all c-minors.
    AllMinors,
    /// Case split on Jacobian pivots (I + e) / (I + (z e - 1)); each leaf's
    /// basis is {1}. Equivalent to 1 in I + minors_c over the algebraic closure.
    PivotSplit,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmoothnessCertificate {
    pub provenance: String,
    pub codim: usize,
    pub verdict: bool,
    /// The ideal itself is the unit ideal (nothing to certify).
    pub empty: bool,
    pub method: SmoothMethod,
    /// Number of branches closed by a {1} basis.
    pub leaves: usize,
    pub witness_digest: String,
}

/// Above this many minors the pivot split is used instead.
pub const DIRECT_MINOR_LIMIT: usize = 4000;

const UNIT_PROBES: usize = 8;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Jacobian criterion: true iff `1 in I + minors_c(Jac(I))`.
pub fn smooth_check(ci: &ChartIdeal, c: usize) -> Result<SmoothnessCertificate> {
    let ring = ci.ring().clone();
    let gens: Vec<MultiPoly> = ci.gens().iter().filter(|g| !g.is_zero()).cloned().collect();
    if ci.ideal.contains_one()? {
        return Ok(SmoothnessCertificate {
            provenance: ci.provenance.clone(),
            codim: c,
            verdict: true,
            empty: true,
            method: SmoothMethod::AllMinors,
            leaves: 1,
            witness_digest: digest("unit ideal"),
        });
    }
    let vars: Vec<usize> = (0..ring.nvars()).collect();
    let jac = jacobian(&gens, &vars, &ring);
    let count = binom(gens.len(), c).saturating_mul(binom(vars.len(), c));
    let cfg = ci.ideal.config();
    if count <= DIRECT_MINOR_LIMIT {
        let mut all = gens.clone();
        all.extend(jac.minors(c)?.into_iter().filter(|m| !m.is_zero()));
        let id = PolyIdeal::new(&ring, all)?.with_config(cfg);
        let verdict = id.contains_one()?;
        let basis: Vec<String> = id.basis()?.iter().map(|p| p.to_string()).collect();
        return Ok(SmoothnessCertificate {
            provenance: ci.provenance.clone(),
            codim: c,
            verdict,
            empty: false,
            method: SmoothMethod::AllMinors,
            leaves: 1,
            witness_digest: digest(&format!("{c}|{}", basis.join(";"))),
        });
    }
    let mut log = Vec::new();
    let verdict = pivot_split(&ring, gens, jac, c, cfg, &mut log, 0)?;
    Ok(SmoothnessCertificate {
        provenance: ci.provenance.clone(),
        codim: c,
        verdict,
        empty: false,
        method: SmoothMethod::PivotSplit,
        leaves: log.len(),
        witness_digest: digest(&log.join("\n")),
    })
}

fn pivot_score(p: &MultiPoly) -> (usize, u32, usize) {
    if p.is_constant() {
        return (0, 0, 0);
    }
    (1, p.total_degree(), p.len())
}

/// Whether `rank M >= c` at every point of V(gens). Each closed branch
/// pushes its path onto `log`; returns false as soon as a branch stays open.
fn pivot_split(
    ring: &Arc<Ring>,
    gens: Vec<MultiPoly>,
    m: PolyMatrix,
    c: usize,
    cfg: GroebnerConfig,
    log: &mut Vec<String>,
    depth: usize,
) -> Result<bool> {
    if c == 0 {
        log.push(format!("{depth}: rank reached"));
        return Ok(true);
    }
    let ideal = PolyIdeal::new(ring, gens.clone())?.with_config(cfg);
    let one = ideal.contains_one()?;
    if one {
        log.push(format!("{depth}: unit"));
        return Ok(true);
    }
    let basis = ideal.basis()?;
    let reduced = m.map(|p| crate::algebra::groebner::normal_form(p, &basis));
    let rows: Vec<usize> = (0..reduced.rows()).filter(|&i| reduced.row(i).iter().any(|p| !p.is_zero())).collect();
    let cols: Vec<usize> = (0..reduced.cols()).filter(|&j| rows.iter().any(|&i| !reduced.get(i, j).is_zero())).collect();
    if rows.len() < c || cols.len() < c {
        return Ok(false);
    }
    let m = reduced.submatrix(&rows, &cols);
    let mut cands: Vec<((usize, u32, usize), usize, usize)> = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            if !e.is_zero() {
                cands.push((pivot_score(e), i, j));
            }
        }
    }
    cands.sort();
    let (mut pi, mut pj) = (cands[0].1, cands[0].2);
    // an entry that is a unit on V(I) closes the e = 0 branch at once
    let mut unit = cands[0].0 .0 == 0;
    if !unit {
        let mut seen: Vec<&MultiPoly> = Vec::new();
        for &(_, i, j) in &cands {
            let e = m.get(i, j);
            if seen.contains(&e) {
                continue;
            }
            seen.push(e);
            if seen.len() > UNIT_PROBES {
                break;
            }
            if ideal.with_generators(vec![e.clone()])?.contains_one()? {
                (pi, pj, unit) = (i, j, true);
                break;
            }
        }
    }
    let e = m.get(pi, pj).clone();
    let schur = |e_scale: &MultiPoly, ring2: &Arc<Ring>| -> Result<PolyMatrix> {
        let mm = m.to_ring(ring2)?;
        let e2 = e_scale.to_ring(ring2)?;
        let ri: Vec<usize> = (0..mm.rows()).filter(|&i| i != pi).collect();
        let cj: Vec<usize> = (0..mm.cols()).filter(|&j| j != pj).collect();
        Ok(PolyMatrix::from_fn(ring2, ri.len(), cj.len(), |a, b| {
            let (i, j) = (ri[a], cj[b]);
            &(&e2 * mm.get(i, j)) - &(mm.get(i, pj) * mm.get(pi, j))
        }))
    };
    if let Some(v) = e.constant_value() {
        // unit pivot: no split
        let inv = ring.field().inv(&v).expect("nonzero constant");
        let ri: Vec<usize> = (0..m.rows()).filter(|&i| i != pi).collect();
        let cj: Vec<usize> = (0..m.cols()).filter(|&j| j != pj).collect();
        // M' = M_rest - col*row/e
        let exact = PolyMatrix::from_fn(ring, ri.len(), cj.len(), |a, b| {
            let (i, j) = (ri[a], cj[b]);
            m.get(i, j) - &(m.get(i, pj) * m.get(pi, j)).scale(&inv)
        });
        return pivot_split(ring, gens, exact, c - 1, cfg, log, depth + 1);
    }
    if unit {
        // e never vanishes on V(I): no inverse needed, rank M = 1 + rank(e M' - col row)
        log.push(format!("{depth}: unit pivot {e}"));
        let h = inverse_mod(ring, &gens, &e, cfg)?;
        let ri: Vec<usize> = (0..m.rows()).filter(|&i| i != pi).collect();
        let cj: Vec<usize> = (0..m.cols()).filter(|&j| j != pj).collect();
        let next = PolyMatrix::from_fn(ring, ri.len(), cj.len(), |a, b| {
            let (i, j) = (ri[a], cj[b]);
            m.get(i, j) - &(&(m.get(i, pj) * m.get(pi, j)) * &h)
        });
        return pivot_split(ring, gens, next, c - 1, cfg, log, depth + 1);
    } else {
        let mut g0 = gens.clone();
        g0.push(e.clone());
        if !pivot_split(ring, g0, m.clone(), c, cfg, log, depth + 1)? {
            return Ok(false);
        }
    }
    // branch e invertible
    let mut names: Vec<String> = ring.vars().to_vec();
    let z = ring.fresh_name("zpiv");
    names.push(z.clone());
    let ring2 = Ring::new(&names, ring.field(), ring.order())?;
    let mut g1: Vec<MultiPoly> = gens.iter().map(|g| g.to_ring(&ring2)).collect::<Result<_>>()?;
    let zv = MultiPoly::var_named(&ring2, &z)?;
    g1.push(&(&zv * &e.to_ring(&ring2)?) - &MultiPoly::one(&ring2));
    let next = schur(&e, &ring2)?;
    pivot_split(&ring2, g1, next, c - 1, cfg, log, depth + 1)
}

/// h with `h e = 1` modulo (gens), for e a unit there: the reduced basis of
/// (gens, z e - 1) under an order eliminating z contains `z - h`.
fn inverse_mod(ring: &Arc<Ring>, gens: &[MultiPoly], e: &MultiPoly, cfg: GroebnerConfig) -> Result<MultiPoly> {
    let z = ring.fresh_name("zinv");
    let mut names = vec![z.clone()];
    names.extend(ring.vars().iter().cloned());
    let ring2 = Ring::new(&names, ring.field(), crate::algebra::MonomialOrder::Block(1))?;
    let mut g2: Vec<MultiPoly> = gens.iter().map(|g| g.to_ring(&ring2)).collect::<Result<_>>()?;
    let zv = MultiPoly::var(&ring2, 0);
    g2.push(&(&zv * &e.to_ring(&ring2)?) - &MultiPoly::one(&ring2));
    let basis = PolyIdeal::new(&ring2, g2)?.with_config(cfg).basis()?;
    let zm = zv.leading_monomial().expect("variable").clone();
    for b in basis.iter() {
        if b.leading_monomial() == Some(&zm) {
            return (&zv - &b.monic()).to_ring(ring);
        }
    }
    Err(Error::Inconsistent(format!("{e} is not a unit")))
}

/// Codimension from the dimension operation: `nvars - dim`.
pub fn codimension(ci: &ChartIdeal) -> Result<usize> {
    let d = ci.ideal.dimension()?;
    if d < 0 {
        return Ok(0);
    }
    Ok(ci.ring().nvars() - d as usize)
}

/// Adds an inverse of t and runs the Jacobian criterion at the codimension
/// reported by the dimension operation.
pub fn invert_t(ci: &ChartIdeal) -> Result<ChartIdeal> {
    let ring = ci.ring();
    let t = MultiPoly::var_named(ring, "t").map_err(|_| Error::InvalidInput("ideal has no parameter t".into()))?;
    let mut names: Vec<String> = ring.vars().to_vec();
    let y = ring.fresh_name("y_t");
    names.push(y.clone());
    let ring2 = Ring::new(&names, ring.field(), ring.order())?;
    let mut gens: Vec<MultiPoly> = ci.gens().iter().map(|g| g.to_ring(&ring2)).collect::<Result<_>>()?;
    let t2 = t.to_ring(&ring2)?;
    gens.push(&(&MultiPoly::var_named(&ring2, &y)? * &t2) - &MultiPoly::one(&ring2));
    let mut roles = ci.roles.clone();
    roles.insert(y.clone(), VarRole::Inverse);
    let mut inverses = ci.inverses.clone();
    inverses.push((y, t2));
    Ok(ChartIdeal {
        ideal: PolyIdeal::new(&ring2, gens)?.with_config(ci.ideal.config()),
        roles,
        inverses,
        provenance: format!("{} | t inverted", ci.provenance),
    })
}

pub fn generic_fiber_smooth_check(ci: &ChartIdeal) -> Result<(SmoothnessCertificate, i64)> {
    let inv = invert_t(ci)?;
    let dim = inv.ideal.dimension()?;
    let c = if dim < 0 { 0 } else { inv.ring().nvars() - dim as usize };
    Ok((smooth_check(&inv, c)?, dim))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointCountReport {
    pub provenance: String,
    pub q: u32,
    pub t_value: Option<u32>,
    pub count: u64,
    pub exhaustive: bool,
    pub coordinates: usize,
    pub bound: usize,
}

pub const DEFAULT_POINT_BOUND: usize = 12;

/// A polynomial compiled for fast evaluation over F_p.
struct Compiled {
    p: u64,
    terms: Vec<(u64, Vec<(usize, u16)>)>,
}

impl Compiled {
    fn new(f: &MultiPoly, p: u32) -> Self {
        let field = f.field();
        let terms = f
            .terms()
            .iter()
            .map(|(m, c)| {
                let coef = match c {
                    Scalar::P(v) => *v as u64,
                    Scalar::Q(q) => {
                        let fp = Field::Prime(p);
                        match fp.from_rational(q) {
                            Ok(Scalar::P(v)) => v as u64,
                            _ => 0,
                        }
                    }
                };
                let _ = field;
                let vars = m.exps().iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
                (coef, vars)
            })
            .collect();
        Compiled { p: p as u64, terms }
    }

    fn eval(&self, x: &[u64]) -> u64 {
        let mut acc = 0u64;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &(i, e) in vars {
                for _ in 0..e {
                    t = t * x[i] % self.p;
                }
                if t == 0 {
                    break;
                }
            }
            acc = (acc + t) % self.p;
        }
        acc
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Enumerates all F_q-points (q prime) of a chart ideal with t fixed to
/// `t_value` (if given) and each chart inverse determined by its relation.
/// Calls `visit` on each point (values of all ring variables).
pub fn for_each_point(
    ci: &ChartIdeal,
    q: u32,
    t_value: Option<u32>,
    bound: usize,
    mut visit: impl FnMut(&[u64]),
) -> Result<PointCountReport> {
    let field = Field::prime(q)?;
    let ring = ci.ring();
    let nv = ring.nvars();
    let t_idx = ring.var_index("t");
    if t_value.is_some() && t_idx.is_none() {
        return Err(Error::InvalidInput("t specialised but absent".into()));
    }
    let inverse_idx: Vec<(usize, Compiled)> = ci
        .inverses
        .iter()
        .map(|(y, f)| {
            let k = ring.var_index(y).ok_or_else(|| Error::InvalidInput(format!("unknown inverse {y}")))?;
            Ok((k, Compiled::new(f, q)))
        })
        .collect::<Result<_>>()?;
    let free: Vec<usize> = (0..nv)
        .filter(|&k| Some(k) != t_idx || t_value.is_none())
        .filter(|k| !inverse_idx.iter().any(|(j, _)| j == k))
        .collect();
    if free.len() > bound {
        return Err(Error::Bound(format!("{} coordinates exceed the exhaustive bound {bound}", free.len())));
    }
    let _ = field;
    let gens: Vec<Compiled> = ci.gens().iter().map(|g| Compiled::new(g, q)).collect();
    let qq = q as u64;
    let mut x = vec![0u64; nv];
    if let (Some(k), Some(v)) = (t_idx, t_value) {
        x[k] = v as u64 % qq;
    }
    let mut count = 0u64;
    let total = (qq as u128).pow(free.len() as u32);
    let mut digits = vec![0u64; free.len()];
    for _ in 0..total {
        for (d, &k) in digits.iter().zip(&free) {
            x[k] = *d;
        }
        let mut ok = true;
        for (k, f) in &inverse_idx {
            let v = f.eval(&x);
            if v == 0 {
                ok = false;
                break;
            }
            x[*k] = inv_mod(v, qq);
        }
        if ok && gens.iter().all(|g| g.eval(&x) == 0) {
            count += 1;
            visit(&x);
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < qq {
                break;
            }
            *d = 0;
        }
    }
    Ok(PointCountReport {
        provenance: ci.provenance.clone(),
        q,
        t_value,
        count,
        exhaustive: true,
        coordinates: free.len(),
        bound,
    })
}

pub fn count_points(ci: &ChartIdeal, q: u32, t_value: Option<u32>) -> Result<PointCountReport> {
    for_each_point(ci, q, t_value, DEFAULT_POINT_BOUND, |_| {})
}

/// All r-dimensional subspaces of F_q^n as n x r bases in reduced column
/// echelon form.
pub fn subspaces(field: Field, n: usize, r: usize) -> Result<Vec<FieldMatrix>> {
    let elems = field.elements()?;
    let mut out = Vec::new();
    for piv in subsets(n, r) {
        // free entries: column c may be nonzero in rows below its pivot that
        // are not themselves pivots
        let mut slots = Vec::new();
        for (c, &p) in piv.iter().enumerate() {
            for row in p + 1..n {
                if !piv.contains(&row) {
                    slots.push((row, c));
                }
            }
        }
        let total = elems.len().pow(slots.len() as u32);
        for code in 0..total {
            let mut m = FieldMatrix::zeros(field, n, r);
            for (c, &p) in piv.iter().enumerate() {
                m.set(p, c, field.one());
            }
            let mut rest = code;
            for &(row, c) in &slots {
                m.set(row, c, elems[rest % elems.len()].clone());
                rest /= elems.len();
            }
            out.push(m);
        }
    }
    Ok(out)
}

/// Direct oracle: tuples of r-subspaces with `T^{d_i}(tau) W_i ⊂ W_{i-1}`.
pub fn direct_subspace_count(spec: &ChainSpec, q: u32, tau: u32) -> Result<u64> {
    let field = Field::prime(q)?;
    let tau = field.from_i64(tau as i64);
    let subs = subspaces(field, spec.n, spec.r)?;
    let m = spec.big_n + 1;
    let alphas: Vec<FieldMatrix> = (0..m).map(|i| schemes::shift_matrix_at(field, spec.n, spec.step(i), &tau)).collect();
    // allowed[i][a][b]: alpha_i W_a ⊂ W_b
    let mut allowed = Vec::with_capacity(m);
    for alpha in &alphas {
        let mut tab = vec![vec![false; subs.len()]; subs.len()];
        for (a, wa) in subs.iter().enumerate() {
            let img = alpha.mul(wa)?;
            for (b, wb) in subs.iter().enumerate() {
                tab[a][b] = img.span_contained_in(wb);
            }
        }
        allowed.push(tab);
    }
    // count cyclic sequences W_0..W_N with allowed[i][W_i][W_{i-1}]
    let s = subs.len();
    let mut total = 0u64;
    for w0 in 0..s {
        // walk i = N, N-1, ..., 1: state W_i; W_{N} must satisfy alpha_0 W_0 ⊂ W_N
        let mut ways = vec![0u64; s];
        for wn in 0..s {
            if allowed[0][w0][wn] {
                ways[wn] = 1;
            }
        }
        // ways[w] = number of (W_N..W_i) ending at W_i = w
        for i in (1..m).rev() {
            if i == 1 {
                break;
            }
            let mut next = vec![0u64; s];
            for (wi, &cnt) in ways.iter().enumerate() {
                if cnt == 0 {
                    continue;
                }
                for (wp, slot) in next.iter_mut().enumerate() {
                    if allowed[i][wi][wp] {
                        *slot += cnt;
                    }
                }
            }
            ways = next;
        }
        for (w1, &cnt) in ways.iter().enumerate() {
            if cnt > 0 && allowed[1][w1][w0] {
                total += cnt;
            }
        }
    }
    Ok(total)
}

/// Points of the local model glued from its pivot charts: each point is
/// owned by the chart whose pivot rows form the lexicographically largest
/// nonvanishing r-minor of every frame.
pub fn glued_local_model_count(spec: &ChainSpec, q: u32, tau: u32, bound: usize) -> Result<u64> {
    let field = Field::prime(q)?;
    let mut total = 0u64;
    for pivots in schemes::local_model_pivot_choices(spec) {
        let ci = schemes::local_model_ideal_over(spec, &pivots, field)?;
        let ring = ci.ring().clone();
        let frames_sym = schemes::local_model_frames(&ring, spec, &pivots)?;
        let mut owned = 0u64;
        let subs = subsets(spec.n, spec.r);
        for_each_point(&ci, q, Some(tau), bound, |x| {
            let point: Vec<Scalar> = x.iter().map(|&v| Scalar::P(v as u32)).collect();
            let mine = frames_sym.iter().zip(&pivots).all(|(fr, piv)| {
                let num = fr.evaluate(&point);
                let owner = subs
                    .iter()
                    .rev()
                    .find(|rows| {
                        let sub = FieldMatrix::from_fn(field, spec.r, spec.r, |a, b| num.get(rows[a], b).clone());
                        !field.is_zero(&sub.det().expect("square"))
                    })
                    .cloned();
                owner.as_ref() == Some(piv)
            });
            if mine {
                owned += 1;
            }
        })?;
        total += owned;
    }
    Ok(total)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CensusReport {
    pub q: u32,
    pub points: u64,
    pub in_chart: u64,
    pub successes: u64,
    pub failures: u64,
    pub coordinates: usize,
}

/// Every F_q-point of mu (any t) satisfying the chart rank conditions is
/// fed to the normal-form algorithm.
pub fn normal_form_census(spec: &ChainSpec, q: u32, bound: usize) -> Result<CensusReport> {
    let field = Field::prime(q)?;
    let mu = schemes::mu_ideal_over(spec.n, spec.r, spec.big_n, field)?;
    let ring = mu.ring().clone();
    let pis = schemes::pi_matrices(&ring, spec.n, spec.r, spec.big_n)?;
    let t_idx = ring.var_index("t").expect("t");
    let mut rep = CensusReport { q, ..Default::default() };
    let mut err = None;
    let r = for_each_point(&mu, q, None, bound, |x| {
        rep.points += 1;
        let point: Vec<Scalar> = x.iter().map(|&v| Scalar::P(v as u32)).collect();
        let mats: Vec<FieldMatrix> = pis.iter().map(|p| p.evaluate(&point)).collect();
        if mats.iter().enumerate().any(|(i, m)| m.rank() < spec.n - spec.step(i)) {
            return;
        }
        rep.in_chart += 1;
        match schemes::chain_normal_form(spec, &mats, &point[t_idx]) {
            Ok(Ok(_)) => rep.successes += 1,
            Ok(Err(_)) => rep.failures += 1,
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    rep.coordinates = r.coordinates;
    Ok(rep)
}

/// Points of mu at t = tau with the chosen minors nonzero whose normal form
/// succeeds; counted without the chart's inverse variables.
pub fn chart_census_count(spec: &ChainSpec, choices: &[schemes::MinorChoice], q: u32, tau: u32) -> Result<u64> {
    let field = Field::prime(q)?;
    let mu = schemes::mu_ideal_over(spec.n, spec.r, spec.big_n, field)?;
    let ring = mu.ring().clone();
    let pis = schemes::pi_matrices(&ring, spec.n, spec.r, spec.big_n)?;
    let tau_s = field.from_i64(tau as i64);
    let mut count = 0u64;
    let mut err = None;
    for_each_point(&mu, q, Some(tau), DEFAULT_POINT_BOUND, |x| {
        let point: Vec<Scalar> = x.iter().map(|&v| Scalar::P(v as u32)).collect();
        let mats: Vec<FieldMatrix> = pis.iter().map(|p| p.evaluate(&point)).collect();
        let in_chart = mats.iter().zip(choices).all(|(m, ch)| {
            let sub = FieldMatrix::from_fn(field, ch.rows.len(), ch.cols.len(), |a, b| m.get(ch.rows[a], ch.cols[b]).clone());
            !field.is_zero(&sub.det().expect("square"))
        });
        if in_chart {
            match schemes::chain_normal_form(spec, &mats, &tau_s) {
                Ok(Ok(_)) => count += 1,
                Ok(Err(_)) => {}
                Err(e) => err = Some(e),
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(count),
    }
}

/// Random invertible matrix whose first `r` columns span `w`.
fn random_completion(w: &FieldMatrix, rng: &mut ChaCha8Rng) -> Result<FieldMatrix> {
    let field = w.field();
    let n = w.rows();
    let r = w.cols();
    let p = field.characteristic() as i64;
    loop {
        // mix the frame by a random invertible r x r matrix and append
        // random columns
        let mix = FieldMatrix::from_fn(field, r, r, |_, _| field.from_i64(rng.gen_range(0..p)));
        if mix.rank() < r {
            continue;
        }
        let head = w.mul(&mix)?;
        let tail = FieldMatrix::from_fn(field, n, n - r, |_, _| field.from_i64(rng.gen_range(0..p)));
        let full = head.hstack(&tail);
        if full.rank() == n {
            return Ok(full);
        }
    }
}

/// All local-model chains (W_0..W_N) at tau over F_q, as subspace bases.
pub fn local_model_chains(spec: &ChainSpec, q: u32, tau: u32) -> Result<Vec<Vec<FieldMatrix>>> {
    let field = Field::prime(q)?;
    let tau_s = field.from_i64(tau as i64);
    let subs = subspaces(field, spec.n, spec.r)?;
    let m = spec.big_n + 1;
    let alphas: Vec<FieldMatrix> = (0..m).map(|i| schemes::shift_matrix_at(field, spec.n, spec.step(i), &tau_s)).collect();
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(
        cur: &mut Vec<usize>,
        m: usize,
        subs: &[FieldMatrix],
        alphas: &[FieldMatrix],
        out: &mut Vec<Vec<FieldMatrix>>,
    ) {
        let i = cur.len();
        if i == m {
            // closing condition alpha_0 W_0 ⊂ W_N
            let ok = alphas[0].mul(&subs[cur[0]]).map(|x| x.span_contained_in(&subs[cur[m - 1]])).unwrap_or(false);
            if ok {
                out.push(cur.iter().map(|&k| subs[k].clone()).collect());
            }
            return;
        }
        for k in 0..subs.len() {
            if i > 0 {
                let ok = alphas[i].mul(&subs[k]).map(|x| x.span_contained_in(&subs[cur[i - 1]])).unwrap_or(false);
                if !ok {
                    continue;
                }
            }
            cur.push(k);
            rec(cur, m, subs, alphas, out);
            cur.pop();
        }
    }
    rec(&mut cur, m, &subs, &alphas, &mut out);
    Ok(out)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub q: u32,
    pub trials: usize,
    pub successes: usize,
    pub zero_tau: usize,
    pub chart_members: usize,
}

/// Seeded round trips: a random local-model chain and random frames psi^
/// give `Pi_i = psi^_{i-1}^{-1} T^{d_i}(tau) psi^_i` in parabolic shape;
/// the normal form must be recovered exactly and the point must lie on mu.
pub fn normal_form_round_trips(spec: &ChainSpec, q: u32, trials: usize, seed: u64) -> Result<RoundTripReport> {
    let field = Field::prime(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = spec.big_n + 1;
    let mut chains_by_tau: BTreeMap<u32, Vec<Vec<FieldMatrix>>> = BTreeMap::new();
    let mut rep = RoundTripReport { q, trials, ..Default::default() };
    let mu = schemes::mu_ideal_over(spec.n, spec.r, spec.big_n, field)?;
    let mu_ring = mu.ring().clone();
    let mu_gens: Vec<Compiled> = mu.gens().iter().map(|g| Compiled::new(g, q)).collect();
    for trial in 0..trials {
        // every other trial sits on the special fibre
        let tau = if trial % 2 == 0 { 0 } else { rng.gen_range(0..q) };
        let chains = match chains_by_tau.get(&tau) {
            Some(c) => c,
            None => {
                let c = local_model_chains(spec, q, tau)?;
                chains_by_tau.entry(tau).or_insert(c)
            }
        };
        if chains.is_empty() {
            return Err(Error::Inconsistent(format!("no local-model chains at tau={tau}")));
        }
        let chain = &chains[rng.gen_range(0..chains.len())];
        let hats: Vec<FieldMatrix> = chain.iter().map(|w| random_completion(w, &mut rng)).collect::<Result<_>>()?;
        let tau_s = field.from_i64(tau as i64);
        let mut point = Vec::with_capacity(m);
        for i in 0..m {
            let prev_inv = hats[(i + m - 1) % m].inverse()?;
            let pi = prev_inv.mul(&schemes::shift_matrix_at(field, spec.n, spec.step(i), &tau_s))?.mul(&hats[i])?;
            if !toric::in_parabolic_shape(&pi, spec.r) {
                return Err(Error::Inconsistent("round-trip point left the parabolic shape".into()));
            }
            point.push(pi);
        }
        // membership in mu at t = tau
        let mut x = vec![0u64; mu_ring.nvars()];
        for (k, name) in mu_ring.vars().iter().enumerate() {
            x[k] = if name == "t" {
                tau as u64
            } else {
                let (i, a, b) = schemes::parse_pi_name(name).expect("Pi variable");
                match point[i].get(a, b) {
                    Scalar::P(v) => *v as u64,
                    Scalar::Q(_) => 0,
                }
            };
        }
        let on_mu = mu_gens.iter().all(|g| g.eval(&x) == 0);
        let ranks_ok = point.iter().enumerate().all(|(i, p)| p.rank() >= spec.n - spec.step(i));
        if on_mu && ranks_ok {
            rep.chart_members += 1;
        }
        if let Ok(psi) = schemes::chain_normal_form(spec, &point, &tau_s)? {
            if schemes::verify_normal_form(spec, &point, &tau_s, &psi)? {
                rep.successes += 1;
            }
        }
        if tau == 0 {
            rep.zero_tau += 1;
        }
    }
    Ok(rep)
}

/// Reduced bases compared as sets of polynomials.
pub fn same_reduced_basis(a: &PolyIdeal, b: &PolyIdeal) -> Result<bool> {
    let ba = a.basis()?;
    let bb = b.basis()?;
    let mut sa: Vec<String> = ba.iter().map(|p| p.to_string()).collect();
    let mut sb: Vec<String> = bb.iter().map(|p| p.to_string()).collect();
    sa.sort();
    sb.sort();
    Ok(sa == sb)
}

fn basis_digest(i: &PolyIdeal) -> Result<String> {
    let b = i.basis()?;
    Ok(digest(&b.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(";")))
}

// ---------------------------------------------------------------- suite

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub big_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub check: String,
    #[serde(default)]
    pub params: CheckParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_pairs: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub checks: Vec<CheckConfig>,
}

/// Check names understood by `run_suite`.
pub const CHECKS: &[&str] = &[
    "index_set",
    "torus_kernel",
    "quotient_torus",
    "open_cell",
    "sigma_fiber",
    "chain_normal_form",
    "normal_form_census",
    "generic_smoothness_mu",
    "generic_smoothness_lm",
    "cyclic_shift",
    "symplectic_involution",
    "kill_torsion",
    "diagonal_products",
    "diagonal_tower",
    "glued_count",
    "mu_dimension",
];

const RANDOMIZED: &[&str] = &["chain_normal_form"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub check: String,
    pub spec: String,
    pub verdict: bool,
    pub witness_digest: String,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub passed: bool,
    pub entries: Vec<ReportEntry>,
}

impl SuiteReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check", "spec", "verdict", "witness_digest", "runtime_ms"]).map_err(csv_err)?;
        for e in &self.entries {
            w.write_record([
                e.check.as_str(),
                e.spec.as_str(),
                if e.verdict { "true" } else { "false" },
                e.witness_digest.as_str(),
                &e.runtime_ms.to_string(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(e.to_string())
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        for c in &self.checks {
            if !CHECKS.contains(&c.check.as_str()) {
                return Err(Error::Config(format!("unknown check `{}`", c.check)));
            }
            if RANDOMIZED.contains(&c.check.as_str()) && c.seed.is_none() {
                return Err(Error::Config(format!("check `{}` needs a seed", c.check)));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<SuiteConfig> {
        let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn need<T: Clone>(v: &Option<T>, name: &str, check: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::Config(format!("check `{check}` needs parameter `{name}`")))
}

fn spec_label(p: &CheckParams) -> String {
    let mut parts = Vec::new();
    if let Some(v) = p.n {
        parts.push(format!("n={v}"));
    }
    if let Some(v) = p.r {
        parts.push(format!("r={v}"));
    }
    if let Some(v) = p.big_n {
        parts.push(format!("N={v}"));
    }
    if let Some(v) = p.g {
        parts.push(format!("g={v}"));
    }
    if let Some(v) = &p.d {
        parts.push(format!("d={}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("/")));
    }
    if let Some(v) = p.q {
        parts.push(format!("q={v}"));
    }
    if let Some(v) = p.tau {
        parts.push(format!("tau={v}"));
    }
    if let Some(v) = p.s {
        parts.push(format!("s={v}"));
    }
    if let Some(v) = p.trials {
        parts.push(format!("trials={v}"));
    }
    parts.join(",")
}

/// Verdict plus the canonical text whose digest is reported.
pub struct CheckOutcome {
    pub verdict: bool,
    pub witness: String,
}

pub fn run_check(c: &CheckConfig) -> Result<CheckOutcome> {
    let p = &c.params;
    let name = c.check.as_str();
    let cfg = GroebnerConfig { max_pairs: c.max_pairs.unwrap_or(crate::algebra::groebner::DEFAULT_MAX_PAIRS) };
    let out = match name {
        "index_set" => {
            let (n, r, bn) = (need(&p.n, "n", name)?, need(&p.r, "r", name)?, need(&p.big_n, "N", name)?);
            let s = toric::enumerate_index_set(n as u32, r as u32, bn)?;
            let oracle = index_set_oracle(n as u32, r as u32, bn);
            CheckOutcome { verdict: s.len() == oracle, witness: format!("{}|{}", s.len(), oracle) }
        }
        "torus_kernel" | "quotient_torus" => {
            let (n, r, bn) = (need(&p.n, "n", name)?, need(&p.r, "r", name)?, need(&p.big_n, "N", name)?);
            let d = CharacterData::new(n as u32, r as u32, bn)?;
            if name == "torus_kernel" {
                let cert = toric::kernel_is_torus_check(&d)?;
                let ok = cert.snf.verify(&crate::algebra::IntMatrix::column(&cert.coords));
                CheckOutcome { verdict: cert.verdict && ok, witness: format!("{:?}|{:?}", cert.coords, cert.snf.invariants) }
            } else {
                let cert = toric::quotient_by_subtorus_check(&d)?;
                CheckOutcome {
                    verdict: cert.verdict,
                    witness: format!("{:?}|{:?}", cert.primitivity.coords, cert.primitivity.snf.invariants),
                }
            }
        }
        "open_cell" => {
            let (n, r, bn) = (need(&p.n, "n", name)?, need(&p.r, "r", name)?, need(&p.big_n, "N", name)?);
            let d = CharacterData::new(n as u32, r as u32, bn)?;
            let cell = toric::symbolic_open_cell(&d, Field::Rational)?;
            let res = toric::open_cell_residues(&cell, &d)?;
            let scaled = toric::symbolic_open_cell_scaled(&d, Field::Rational, true)?;
            let mut invariant = true;
            for i in 0..=bn {
                let a = cell.pi[i].to_ring(&scaled.ring)?;
                for (x, y) in a.entries().iter().zip(scaled.pi[i].entries()) {
                    if !scaled.relations.reduce(&(x - y))?.is_zero() {
                        invariant = false;
                    }
                }
            }
            let tdiff = &cell.t.to_ring(&scaled.ring)? - &scaled.t;
            invariant &= scaled.relations.reduce(&tdiff)?.is_zero();
            let zero = res.iter().all(|x| x.is_zero());
            CheckOutcome { verdict: zero && invariant, witness: format!("{}|{zero}|{invariant}", res.len()) }
        }
        "sigma_fiber" => {
            let g = need(&p.g, "g", name)?;
            let rep = resolution::sigma_fiber_freecount(g)?;
            let ok = rep.consistent && rep.free_count == g * (3 * g - 1) / 2;
            CheckOutcome { verdict: ok, witness: format!("{}|{:?}", rep.free_count, rep.free_coordinates) }
        }
        "chain_normal_form" => {
            let spec = ChainSpec::unitary(need(&p.n, "n", name)?, need(&p.r, "r", name)?, need(&p.d, "d", name)?)?;
            let q = need(&p.q, "q", name)?;
            let trials = p.trials.unwrap_or(100);
            let rep = normal_form_round_trips(&spec, q, trials, c.seed.expect("validated"))?;
            CheckOutcome {
                verdict: rep.successes == trials && rep.chart_members == trials,
                witness: format!("{}|{}|{}", rep.successes, rep.chart_members, rep.zero_tau),
            }
        }
        "normal_form_census" => {
            let spec = ChainSpec::unitary(need(&p.n, "n", name)?, need(&p.r, "r", name)?, need(&p.d, "d", name)?)?;
            let q = p.q.unwrap_or(2);
            let rep = normal_form_census(&spec, q, p.bound.unwrap_or(16))?;
            CheckOutcome {
                verdict: rep.failures == 0 && rep.in_chart > 0,
                witness: format!("{}|{}|{}", rep.points, rep.in_chart, rep.successes),
            }
        }
        "generic_smoothness_mu" => {
            let (n, r, bn) = (need(&p.n, "n", name)?, need(&p.r, "r", name)?, need(&p.big_n, "N", name)?);
            let mut mu = schemes::mu_ideal(n, r, bn)?;
            mu.ideal = mu.ideal.with_config(cfg);
            let (cert, dim) = generic_fiber_smooth_check(&mu)?;
            CheckOutcome { verdict: cert.verdict && !cert.empty, witness: format!("{dim}|{}", cert.witness_digest) }
        }
        "generic_smoothness_lm" => {
            let spec = ChainSpec::unitary(need(&p.n, "n", name)?, need(&p.r, "r", name)?, need(&p.d, "d", name)?)?;
            let mut verdict = true;
            let mut w = Vec::new();
            for piv in schemes::local_model_pivot_choices(&spec) {
                let mut lm = schemes::local_model_ideal(&spec, &piv)?;
                lm.ideal = lm.ideal.with_config(cfg);
                let (cert, dim) = generic_fiber_smooth_check(&lm)?;
                verdict &= cert.verdict && !cert.empty;
                w.push(format!("{piv:?}:{dim}:{}", cert.witness_digest));
            }
            CheckOutcome { verdict, witness: w.join(";") }
        }
        "cyclic_shift" => {
            let (n, r, bn) = (need(&p.n, "n", name)?, need(&p.r, "r", name)?, need(&p.big_n, "N", name)?);
            let mut mu = schemes::mu_ideal(n, r, bn)?;
            mu.ideal = mu.ideal.with_config(cfg);
            let shifts: Vec<i64> = match p.s {
                Some(s) => vec![s],
                None => (0..=bn as i64).collect(),
            };
            let mut verdict = true;
            for s in shifts {
                let sh = schemes::apply_cyclic_shift(&mu, s)?;
                verdict &= same_reduced_basis(&mu.ideal, &sh.ideal.with_config(cfg))?;
            }
            CheckOutcome { verdict, witness: basis_digest(&mu.ideal)? }
        }
        "symplectic_involution" => {
            let (g, bn) = (need(&p.g, "g", name)?, need(&p.big_n, "N", name)?);
            let mut mu = schemes::mu_ideal(2 * g, g, bn)?;
            mu.ideal = mu.ideal.with_config(cfg);
            let inv = schemes::apply_symplectic_involution(&mu, g)?;
            let twice = schemes::apply_symplectic_involution(&inv, g)?;
            let fixed = same_reduced_basis(&mu.ideal, &inv.ideal.with_config(cfg))?;
            let involutive = twice.gens() == mu.gens();
            CheckOutcome { verdict: fixed && involutive, witness: basis_digest(&mu.ideal)? }
        }
        "kill_torsion" => {
            let corpus = torsion_corpus()?;
            let mut verdict = true;
            let mut w = Vec::new();
            for ci in &corpus {
                let once = resolution::kill_t_torsion(ci)?;
                let twice = resolution::kill_t_torsion(&once)?;
                let idem = same_reduced_basis(&once.ideal, &twice.ideal)?;
                let monotone = once.ideal.contains_ideal(&ci.ideal)?;
                let regular = resolution::t_regular(&once)?;
                verdict &= idem && monotone && regular;
                w.push(basis_digest(&once.ideal)?);
            }
            CheckOutcome { verdict, witness: w.join(";") }
        }
        "diagonal_products" => {
            let g = need(&p.g, "g", name)?;
            let d = resolution::diagonal_chart_ideals(g)?;
            let ok = d.products_hold()? && d.minors_principal().is_ok();
            CheckOutcome { verdict: ok, witness: format!("{g}|{ok}") }
        }
        "diagonal_tower" => {
            let g = need(&p.g, "g", name)?;
            let charts = resolution::diagonal_tower(g)?;
            let (total, nonempty, principal) = resolution::tower_summary(&charts)?;
            CheckOutcome { verdict: nonempty == principal && nonempty > 0, witness: format!("{total}|{nonempty}|{principal}") }
        }
        "glued_count" => {
            let spec = ChainSpec::unitary(need(&p.n, "n", name)?, need(&p.r, "r", name)?, need(&p.d, "d", name)?)?;
            let (q, tau) = (need(&p.q, "q", name)?, p.tau.unwrap_or(0));
            let glued = glued_local_model_count(&spec, q, tau, p.bound.unwrap_or(DEFAULT_POINT_BOUND))?;
            let direct = direct_subspace_count(&spec, q, tau)?;
            CheckOutcome { verdict: glued == direct, witness: format!("{glued}|{direct}") }
        }
        "mu_dimension" => {
            let (n, r, bn) = (need(&p.n, "n", name)?, need(&p.r, "r", name)?, need(&p.big_n, "N", name)?);
            let mu = schemes::mu_ideal(n, r, bn)?;
            let dim = mu.ideal.dimension()?;
            let oracle = mu_dimension_by_points(n, r, bn)?;
            CheckOutcome { verdict: dim == oracle, witness: format!("{dim}|{oracle}") }
        }
        other => return Err(Error::Config(format!("unknown check `{other}`"))),
    };
    Ok(out)
}

/// Independent count of S^{P,N}: tuples in the bounded box filtered by both
/// constraints.
pub fn index_set_oracle(n: u32, r: u32, big_n: usize) -> usize {
    let parts = 2 * (big_n + 1);
    let total = (n as usize + 1).pow(parts as u32);
    let mut count = 0;
    for code in 0..total {
        let mut rest = code;
        let mut digits = Vec::with_capacity(parts);
        for _ in 0..parts {
            digits.push((rest % (n as usize + 1)) as u32);
            rest /= n as usize + 1;
        }
        let sum: u32 = digits.iter().sum();
        let first: u32 = digits.iter().step_by(2).sum();
        if sum == n && first >= r {
            count += 1;
        }
    }
    count
}

/// Dimension from point growth: `#V(F_p) ~ c p^dim`, read off as the
/// log-slope between the two largest primes (all coordinates free).
pub fn dimension_by_point_growth(build: impl Fn(Field) -> Result<ChartIdeal>, primes: &[u32]) -> Result<i64> {
    if primes.len() < 2 {
        return Err(Error::InvalidInput("need two primes".into()));
    }
    let mut counts = Vec::new();
    for &p in primes {
        let ci = build(Field::prime(p)?)?;
        let rep = for_each_point(&ci, p, None, 16, |_| {})?;
        counts.push((p as f64, rep.count as f64));
    }
    let (p1, n1) = counts[counts.len() - 2];
    let (p2, n2) = counts[counts.len() - 1];
    if n1 == 0.0 || n2 == 0.0 {
        return Ok(-1);
    }
    Ok(((n2 / n1).ln() / (p2 / p1).ln()).round() as i64)
}

pub fn mu_dimension_by_points(n: usize, r: usize, big_n: usize) -> Result<i64> {
    dimension_by_point_growth(|f| schemes::mu_ideal_over(n, r, big_n, f), &[5, 7])
}

/// The 20-ideal corpus for the t-saturation checks.
pub fn torsion_corpus() -> Result<Vec<ChartIdeal>> {
    let ring = Ring::new(&["x", "y", "t"], Field::Rational, crate::algebra::MonomialOrder::GrevLex)?;
    let texts: [&[&str]; 20] = [
        &["t*x"],
        &["x"],
        &["t^2"],
        &["t*x", "t*y"],
        &["x*y - t"],
        &["t*x^2", "y"],
        &["t^2*x", "t*y^2"],
        &["x^2 - t*y"],
        &["t*(x - 1)", "y^2"],
        &["t*x*y", "x^3"],
        &["x*y", "t*x"],
        &["t^3*y - t^2*x"],
        &["x^2 - t", "y^2 - t"],
        &["t*x - t*y"],
        &["x*t^2 - y*t^2", "x*y"],
        &["t*y", "x*y - t"],
        &["x^2*t", "y*t - x*t"],
        &["t^2 - t*x"],
        &["y - t*x", "t*y"],
        &[],
    ];
    texts
        .iter()
        .enumerate()
        .map(|(k, g)| {
            Ok(ChartIdeal {
                ideal: PolyIdeal::parse(&ring, g)?,
                roles: BTreeMap::new(),
                inverses: Vec::new(),
                provenance: format!("corpus#{k}"),
            })
        })
        .collect()
}

/// Runs every check; failures and errors mark entries false without
/// aborting the suite. Entries are sorted by (check, spec).
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let run_one = |c: &CheckConfig| -> ReportEntry {
        let start = Instant::now();
        let (verdict, witness) = match run_check(c) {
            Ok(o) => (o.verdict, o.witness),
            Err(e) => (false, format!("error: {e}")),
        };
        ReportEntry {
            check: c.check.clone(),
            spec: spec_label(&c.params),
            verdict,
            witness_digest: digest(&witness),
            runtime_ms: start.elapsed().as_millis().to_u64().unwrap_or(u64::MAX),
        }
    };
    #[cfg(feature = "parallel")]
    let mut entries: Vec<ReportEntry> = {
        use rayon::prelude::*;
        config.checks.par_iter().map(run_one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mut entries: Vec<ReportEntry> = config.checks.iter().map(run_one).collect();
    entries.sort_by(|a, b| (&a.check, &a.spec).cmp(&(&b.check, &b.spec)));
    let passed = entries.iter().all(|e| e.verdict);
    Ok(SuiteReport { generated_at: None, passed, entries })
}

fn check(name: &str, params: CheckParams) -> CheckConfig {
    CheckConfig { check: name.into(), params, seed: None, max_pairs: None }
}

fn nrn(n: usize, r: usize, big_n: usize) -> CheckParams {
    CheckParams { n: Some(n), r: Some(r), big_n: Some(big_n), ..Default::default() }
}

/// The configuration covering every acceptance criterion.
pub fn default_config() -> SuiteConfig {
    let mut checks = Vec::new();
    for g in 1..=3 {
        checks.push(check("sigma_fiber", CheckParams { g: Some(g), ..Default::default() }));
        checks.push(check("diagonal_products", CheckParams { g: Some(g), ..Default::default() }));
    }
    for n in 2..=4 {
        for r in 1..n {
            for bn in 1..=2 {
                checks.push(check("torus_kernel", nrn(n, r, bn)));
                checks.push(check("quotient_torus", nrn(n, r, bn)));
            }
        }
    }
    for (n, bn) in [(2, 1), (2, 2), (3, 1)] {
        checks.push(check("open_cell", nrn(n, 1, bn)));
    }
    for d in [vec![1, 1], vec![1, 2], vec![2, 1]] {
        let n = d.iter().sum();
        for q in [5u32, 7] {
            let mut c = check(
                "chain_normal_form",
                CheckParams { n: Some(n), r: Some(1), d: Some(d.clone()), q: Some(q), trials: Some(100), ..Default::default() },
            );
            c.seed = Some(q as u64 * 1000 + n as u64);
            checks.push(c);
        }
        checks.push(check(
            "normal_form_census",
            CheckParams { n: Some(n), r: Some(1), d: Some(d.clone()), q: Some(2), ..Default::default() },
        ));
    }
    for n in 2..=3 {
        for r in 1..n {
            for bn in 1..=2 {
                checks.push(check("generic_smoothness_mu", nrn(n, r, bn)));
                checks.push(check("cyclic_shift", nrn(n, r, bn)));
            }
        }
    }
    for d in [vec![1, 1], vec![1, 1, 1], vec![1, 2], vec![2, 1]] {
        let n: usize = d.iter().sum();
        for r in 1..n {
            checks.push(check("generic_smoothness_lm", CheckParams { n: Some(n), r: Some(r), d: Some(d.clone()), ..Default::default() }));
        }
    }
    for g in 1..=2 {
        for bn in 1..=2 {
            checks.push(check("symplectic_involution", CheckParams { g: Some(g), big_n: Some(bn), ..Default::default() }));
        }
    }
    checks.push(check("kill_torsion", CheckParams::default()));
    checks.push(check("diagonal_tower", CheckParams { g: Some(2), ..Default::default() }));
    checks.push(check("index_set", nrn(2, 1, 1)));
    checks.push(check("index_set", nrn(3, 1, 1)));
    for (n, d) in [(2, vec![1, 1]), (3, vec![1, 2])] {
        for q in [2u32, 3] {
            checks.push(check(
                "glued_count",
                CheckParams { n: Some(n), r: Some(1), d: Some(d.clone()), q: Some(q), tau: Some(0), ..Default::default() },
            ));
        }
    }
    checks.push(check("mu_dimension", nrn(2, 1, 1)));
    SuiteConfig { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(vars: &[&str], gens: &[&str]) -> ChartIdeal {
        let ring = Ring::new(vars, Field::Rational, crate::algebra::MonomialOrder::GrevLex).unwrap();
        ChartIdeal { ideal: PolyIdeal::parse(&ring, gens).unwrap(), roles: BTreeMap::new(), inverses: vec![], provenance: "test".into() }
    }

    #[test]
    fn jacobian_examples() {
        assert!(smooth_check(&ci(&["x", "y", "t"], &["x*y - t"]), 1).unwrap().verdict);
        assert!(!smooth_check(&ci(&["x", "y"], &["x*y"]), 1).unwrap().verdict);
    }

    #[test]
    fn generic_fibre_of_mu_2_1_1() {
        let mu = schemes::mu_ideal(2, 1, 1).unwrap();
        let (cert, dim) = generic_fiber_smooth_check(&mu).unwrap();
        assert!(cert.verdict);
        assert_eq!(dim, 4);
        let (cert, _) = generic_fiber_smooth_check(&ci(&["x", "t"], &["t"])).unwrap();
        assert!(cert.empty);
    }

    #[test]
    fn local_model_glued_count() {
        let spec = ChainSpec::unitary(2, 1, vec![1, 1]).unwrap();
        assert_eq!(direct_subspace_count(&spec, 2, 0).unwrap(), 5);
        assert_eq!(glued_local_model_count(&spec, 2, 0, 12).unwrap(), 5);
        for d in [vec![1, 2], vec![2, 1], vec![1, 1, 1]] {
            let spec = ChainSpec::unitary(3, 1, d).unwrap();
            for (q, tau) in [(2, 0), (2, 1), (3, 0)] {
                let direct = direct_subspace_count(&spec, q, tau).unwrap();
                assert_eq!(glued_local_model_count(&spec, q, tau, 12).unwrap(), direct, "{:?} q={q} tau={tau}", spec.d);
            }
        }
    }

    #[test]
    fn mu_chart_counts_match_census() {
        let spec = ChainSpec::unitary(2, 1, vec![1, 1]).unwrap();
        let f = Field::prime(2).unwrap();
        for choices in schemes::mu_chart_choices(&spec) {
            let chart = schemes::mu_chart_ideal_over(&spec, &choices, f).unwrap();
            let direct = count_points(&chart, 2, Some(0)).unwrap();
            assert!(direct.exhaustive);
            assert_eq!(direct.count, chart_census_count(&spec, &choices, 2, 0).unwrap());
        }
    }

    #[test]
    fn dimension_two_ways() {
        let mu = schemes::mu_ideal(2, 1, 1).unwrap();
        assert_eq!(mu.ideal.dimension().unwrap(), 4);
        assert_eq!(mu_dimension_by_points(2, 1, 1).unwrap(), 4);
    }

    #[test]
    fn subspace_counts() {
        // Gaussian binomials [3 choose 1]_2 = 7, [4 choose 2]_2 = 35
        let f = Field::prime(2).unwrap();
        assert_eq!(subspaces(f, 3, 1).unwrap().len(), 7);
        assert_eq!(subspaces(f, 4, 2).unwrap().len(), 35);
    }

    #[test]
    fn unknown_check_rejected() {
        let cfg = SuiteConfig { checks: vec![check("nope", CheckParams::default())] };
        assert!(matches!(run_suite(&cfg), Err(Error::Config(_))));
        let empty = run_suite(&SuiteConfig::default()).unwrap();
        assert!(empty.passed && empty.entries.is_empty());
    }
}
