//! Chart ideals for the matrix-equation schemes: mu^{P,N}, Faltings's
//! mu^{r,N}, Sigma^{g,N}, the Grassmannian-chart local models, the chain
//! normal form and the two extra symmetries.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::intmat::IntMatrix;
use crate::algebra::matrix::subsets;
use crate::algebra::{Field, FieldMatrix, MonomialOrder, MultiPoly, PolyIdeal, PolyMatrix, Ring, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n: usize,
    pub r: usize,
    pub big_n: usize,
    /// `d_1, ..., d_{N+1}`
    pub d: Vec<usize>,
    pub symplectic: bool,
    pub g: Option<usize>,
}

impl ChainSpec {
    pub fn unitary(n: usize, r: usize, d: Vec<usize>) -> Result<Self> {
        let spec = ChainSpec { n, r, big_n: d.len().saturating_sub(1), d, symplectic: false, g: None };
        spec.validate()?;
        Ok(spec)
    }

    /// `d` holds `d_1..d_N` (summing to g); `d_{N+1} = g` is appended.
    pub fn symplectic(g: usize, d: Vec<usize>) -> Result<Self> {
        let mut full = d;
        full.push(g);
        let spec = ChainSpec { n: 2 * g, r: g, big_n: full.len() - 1, d: full, symplectic: true, g: Some(g) };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 1 || self.r + 1 > self.n {
            return Err(Error::InvalidSpec(format!("need 1 <= r <= n-1, got n={}, r={}", self.n, self.r)));
        }
        if self.d.len() != self.big_n + 1 || self.big_n < 1 {
            return Err(Error::InvalidSpec("need N >= 1 and N+1 chain steps".into()));
        }
        if self.d.contains(&0) {
            return Err(Error::InvalidSpec("chain steps must be positive".into()));
        }
        if self.d.iter().sum::<usize>() != self.n {
            return Err(Error::InvalidSpec(format!("steps {:?} do not sum to n={}", self.d, self.n)));
        }
        if self.symplectic {
            let g = self.g.ok_or_else(|| Error::InvalidSpec("symplectic spec without g".into()))?;
            if self.n != 2 * g || self.r != g || self.d[self.big_n] != g {
                return Err(Error::InvalidSpec("symplectic spec needs n = 2g, r = g, d_{N+1} = g".into()));
            }
        }
        Ok(())
    }

    /// Step attached to `Pi_i`: `d_i` for `i >= 1`, `d_{N+1}` for `i = 0`.
    pub fn step(&self, i: usize) -> usize {
        if i == 0 { self.d[self.big_n] } else { self.d[i - 1] }
    }
}

/// Block-upper-triangular pattern: blocks A (r x r), B, C; the lower-left
/// (n-r) x r block vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicShape {
    pub n: usize,
    pub r: usize,
}

impl ParabolicShape {
    pub fn is_free(&self, row: usize, col: usize) -> bool {
        !(row >= self.r && col < self.r)
    }

    /// Free positions, row-major, 0-based.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.is_free(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n * self.n - (self.n - self.r) * self.r
    }

    pub fn var_names(&self, prefix: &str) -> Vec<String> {
        self.positions().into_iter().map(|(i, j)| format!("{prefix}_{}_{}", i + 1, j + 1)).collect()
    }

    pub fn symbolic(&self, ring: &Arc<Ring>, prefix: &str) -> Result<PolyMatrix> {
        let mut m = PolyMatrix::zeros(ring, self.n, self.n);
        for (i, j) in self.positions() {
            m.set(i, j, MultiPoly::var_named(ring, &format!("{prefix}_{}_{}", i + 1, j + 1))?);
        }
        Ok(m)
    }

    pub fn contains(&self, m: &PolyMatrix) -> bool {
        (self.r..self.n).all(|i| (0..self.r).all(|j| m.get(i, j).is_zero()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarRole {
    MatrixEntry,
    Parameter,
    Inverse,
    Pairing,
    ChartCoordinate,
    Auxiliary,
}

#[derive(Clone, Debug)]
pub struct ChartIdeal {
    pub ideal: PolyIdeal,
    pub roles: BTreeMap<String, VarRole>,
    /// `(y, f)` with the relation `y*f - 1` among the generators.
    pub inverses: Vec<(String, MultiPoly)>,
    pub provenance: String,
}

impl ChartIdeal {
    pub fn ring(&self) -> &Arc<Ring> {
        self.ideal.ring()
    }

    pub fn gens(&self) -> &[MultiPoly] {
        self.ideal.gens()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let ring = self.ring();
        json!({
            "field": ring.field().tag(),
            "vars": ring.vars(),
            "generators": self.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "inverses": self.inverses.iter().map(|(y, f)| json!({"var": y, "of": f.to_string()})).collect::<Vec<_>>(),
            "provenance": self.provenance,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ChartIdeal> {
        let bad = |what: &str| Error::Parse(format!("ideal JSON: missing or malformed `{what}`"));
        let field = Field::from_tag(v.get("field").and_then(|f| f.as_str()).ok_or_else(|| bad("field"))?)?;
        let vars: Vec<String> = v
            .get("vars")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("vars"))?
            .iter()
            .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad("vars")))
            .collect::<Result<_>>()?;
        let ring = Ring::new(&vars, field, MonomialOrder::GrevLex)?;
        let gens: Vec<String> = v
            .get("generators")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("generators"))?
            .iter()
            .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad("generators")))
            .collect::<Result<_>>()?;
        let ideal = PolyIdeal::parse(&ring, &gens)?;
        let mut inverses = Vec::new();
        if let Some(arr) = v.get("inverses").and_then(|x| x.as_array()) {
            for e in arr {
                let y = e.get("var").and_then(|x| x.as_str()).ok_or_else(|| bad("inverses"))?;
                let f = ring.parse(e.get("of").and_then(|x| x.as_str()).ok_or_else(|| bad("inverses"))?)?;
                inverses.push((y.to_string(), f));
            }
        }
        let roles = vars.iter().map(|v| (v.clone(), guess_role(v))).collect();
        let provenance = v.get("provenance").and_then(|x| x.as_str()).unwrap_or("imported").to_string();
        Ok(ChartIdeal { ideal, roles, inverses, provenance })
    }

    pub fn with_ideal(&self, ideal: PolyIdeal, provenance: String) -> ChartIdeal {
        ChartIdeal { ideal, roles: self.roles.clone(), inverses: self.inverses.clone(), provenance }
    }
}

fn guess_role(name: &str) -> VarRole {
    if name == "t" {
        VarRole::Parameter
    } else if parse_pi_name(name).is_some() || name.starts_with('A') {
        VarRole::MatrixEntry
    } else if name.starts_with('y') {
        VarRole::Inverse
    } else if name.starts_with('J') {
        VarRole::Pairing
    } else if name.starts_with('M') {
        VarRole::ChartCoordinate
    } else {
        VarRole::Auxiliary
    }
}

/// `Pi{i}_{row}_{col}` -> `(i, row-1, col-1)`.
pub fn parse_pi_name(name: &str) -> Option<(usize, usize, usize)> {
    let rest = name.strip_prefix("Pi")?;
    let mut it = rest.split('_');
    let i = it.next()?.parse().ok()?;
    let row: usize = it.next()?.parse().ok()?;
    let col: usize = it.next()?.parse().ok()?;
    if it.next().is_some() || row == 0 || col == 0 {
        return None;
    }
    Some((i, row - 1, col - 1))
}

/// `T^m` for the n x n shift `T e_1 = t e_n`, `T e_j = e_{j-1}`, with `t`
/// taken from `t`.
pub fn shift_matrix_power(ring: &Arc<Ring>, n: usize, m: usize, t: &MultiPoly) -> PolyMatrix {
    let (q, s) = (m / n, m % n);
    let tq = t.pow(q as u32);
    let tq1 = &tq * t;
    let mut out = PolyMatrix::zeros(ring, n, n);
    for j in 0..n {
        if j >= s {
            out.set(j - s, j, tq.clone());
        } else {
            out.set(j + n - s, j, tq1.clone());
        }
    }
    out
}

/// `T^m` with `t` specialised to `tau`.
pub fn shift_matrix_at(field: Field, n: usize, m: usize, tau: &Scalar) -> FieldMatrix {
    let (q, s) = (m / n, m % n);
    let tq = field.pow(tau, q as u64);
    let tq1 = field.mul(&tq, tau);
    let mut out = FieldMatrix::zeros(field, n, n);
    for j in 0..n {
        if j >= s {
            out.set(j - s, j, tq.clone());
        } else {
            out.set(j + n - s, j, tq1.clone());
        }
    }
    out
}

/// Single-variable ring `Q[t]` used for displaying shift powers.
pub fn shift_matrix_power_t(n: usize, m: usize) -> Result<PolyMatrix> {
    let ring = Ring::new(&["t"], Field::Rational, MonomialOrder::GrevLex)?;
    let t = MultiPoly::var(&ring, 0);
    Ok(shift_matrix_power(&ring, n, m, &t))
}

fn push_unique(gens: &mut Vec<MultiPoly>, seen: &mut HashSet<MultiPoly>, p: MultiPoly) {
    if !p.is_zero() && seen.insert(p.clone()) {
        gens.push(p);
    }
}

fn pi_var_names(n: usize, r: usize, big_n: usize) -> Vec<String> {
    let shape = ParabolicShape { n, r };
    let mut names = Vec::new();
    for i in 0..=big_n {
        names.extend(shape.var_names(&format!("Pi{i}")));
    }
    names
}

/// Entries of every cyclic product `Pi_k Pi_{k+1} ... Pi_{k+N} - t Id`,
/// without zero or repeated generators.
fn cyclic_product_generators(pis: &[PolyMatrix], t: &MultiPoly) -> Result<Vec<MultiPoly>> {
    let m = pis.len();
    let ring = t.ring().clone();
    let n = pis[0].rows();
    let tid = PolyMatrix::scalar_identity(&ring, n, t);
    let mut gens = Vec::new();
    let mut seen = HashSet::new();
    for k in 0..m {
        let mut prod = pis[k].clone();
        for step in 1..m {
            prod = prod.mul(&pis[(k + step) % m])?;
        }
        for p in prod.sub(&tid)?.entries() {
            push_unique(&mut gens, &mut seen, p.clone());
        }
    }
    Ok(gens)
}

pub fn mu_ideal(n: usize, r: usize, big_n: usize) -> Result<ChartIdeal> {
    mu_ideal_over(n, r, big_n, Field::Rational)
}

pub fn mu_ideal_over(n: usize, r: usize, big_n: usize, field: Field) -> Result<ChartIdeal> {
    if r < 1 || r + 1 > n || big_n < 1 {
        return Err(Error::InvalidSpec(format!("need 1 <= r <= n-1 and N >= 1 (n={n}, r={r}, N={big_n})")));
    }
    let mut names = pi_var_names(n, r, big_n);
    names.push("t".into());
    let ring = Ring::new(&names, field, MonomialOrder::GrevLex)?;
    let shape = ParabolicShape { n, r };
    let pis = (0..=big_n).map(|i| shape.symbolic(&ring, &format!("Pi{i}"))).collect::<Result<Vec<_>>>()?;
    let t = MultiPoly::var_named(&ring, "t")?;
    let gens = cyclic_product_generators(&pis, &t)?;
    let mut roles: BTreeMap<String, VarRole> = names.iter().map(|v| (v.clone(), VarRole::MatrixEntry)).collect();
    roles.insert("t".into(), VarRole::Parameter);
    Ok(ChartIdeal {
        ideal: PolyIdeal::new(&ring, gens)?,
        roles,
        inverses: Vec::new(),
        provenance: format!("mu(n={n},r={r},N={big_n})"),
    })
}

/// Symbolic `Pi_i` matrices of a ring containing the mu variables.
pub fn pi_matrices(ring: &Arc<Ring>, n: usize, r: usize, big_n: usize) -> Result<Vec<PolyMatrix>> {
    let shape = ParabolicShape { n, r };
    (0..=big_n).map(|i| shape.symbolic(ring, &format!("Pi{i}"))).collect()
}

/// A chosen minor of `Pi_i`: 0-based row and column subsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorChoice {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Adds `y_i * minor_i - 1` for one chosen `(n - d_i)`-minor of each `Pi_i`.
pub fn mu_chart_ideal(spec: &ChainSpec, choices: &[MinorChoice]) -> Result<ChartIdeal> {
    mu_chart_ideal_over(spec, choices, Field::Rational)
}

pub fn mu_chart_ideal_over(spec: &ChainSpec, choices: &[MinorChoice], field: Field) -> Result<ChartIdeal> {
    spec.validate()?;
    let (n, r, big_n) = (spec.n, spec.r, spec.big_n);
    if choices.len() != big_n + 1 {
        return Err(Error::InvalidInput(format!("need {} minor choices", big_n + 1)));
    }
    let base = mu_ideal_over(n, r, big_n, field)?;
    let mut names: Vec<String> = base.ring().vars().to_vec();
    for i in 0..=big_n {
        names.push(format!("y{i}"));
    }
    let ring = Ring::new(&names, field, MonomialOrder::GrevLex)?;
    let pis = pi_matrices(&ring, n, r, big_n)?;
    let mut gens: Vec<MultiPoly> = base.gens().iter().map(|g| g.to_ring(&ring)).collect::<Result<_>>()?;
    let mut inverses = Vec::new();
    let mut roles = base.roles.clone();
    for (i, ch) in choices.iter().enumerate() {
        let k = ch.rows.len();
        if k != ch.cols.len() || k > n {
            return Err(Error::InvalidInput(format!("minor of size outside [0, {n}]")));
        }
        let want = n.checked_sub(spec.step(i)).ok_or_else(|| Error::InvalidSpec("step exceeds n".into()))?;
        if k != want {
            return Err(Error::InvalidInput(format!("Pi{i} needs a minor of size {want}, got {k}")));
        }
        if ch.rows.iter().chain(&ch.cols).any(|&x| x >= n) || !strictly_increasing(&ch.rows) || !strictly_increasing(&ch.cols) {
            return Err(Error::InvalidInput(format!("invalid minor indices for Pi{i}")));
        }
        let minor = pis[i].submatrix(&ch.rows, &ch.cols).det()?;
        let y = format!("y{i}");
        gens.push(&(&MultiPoly::var_named(&ring, &y)? * &minor) - &MultiPoly::one(&ring));
        inverses.push((y.clone(), minor));
        roles.insert(y, VarRole::Inverse);
    }
    let desc: Vec<String> = choices.iter().map(|c| format!("{:?}x{:?}", c.rows, c.cols)).collect();
    Ok(ChartIdeal {
        ideal: PolyIdeal::new(&ring, gens)?,
        roles,
        inverses,
        provenance: format!("mu_chart(n={n},r={r},d={:?};minors={})", spec.d, desc.join(";")),
    })
}

fn strictly_increasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// Every combination of minors of the right sizes; the open locus is the
/// union of these charts.
pub fn mu_chart_choices(spec: &ChainSpec) -> Vec<Vec<MinorChoice>> {
    let per: Vec<Vec<MinorChoice>> = (0..=spec.big_n)
        .map(|i| {
            let k = spec.n - spec.step(i);
            let subs = subsets(spec.n, k);
            let mut v = Vec::new();
            for rs in &subs {
                for cs in &subs {
                    v.push(MinorChoice { rows: rs.clone(), cols: cs.clone() });
                }
            }
            v
        })
        .collect();
    let mut out = vec![Vec::new()];
    for opts in per {
        let mut next = Vec::new();
        for prefix in &out {
            for o in &opts {
                let mut p = prefix.clone();
                p.push(o.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Full r x r matrices `A{i}_{j}_{k}` with all cyclic products equal to `t Id`.
pub fn faltings_mu_ideal(r: usize, big_n: usize) -> Result<ChartIdeal> {
    if r < 1 || big_n < 1 {
        return Err(Error::InvalidSpec("need r >= 1 and N >= 1".into()));
    }
    let mut names = Vec::new();
    for i in 0..=big_n {
        for j in 0..r {
            for k in 0..r {
                names.push(format!("A{i}_{}_{}", j + 1, k + 1));
            }
        }
    }
    names.push("t".into());
    let ring = Ring::new(&names, Field::Rational, MonomialOrder::GrevLex)?;
    let mats = (0..=big_n)
        .map(|i| PolyMatrix::of_variables(&ring, &format!("A{i}"), r, r))
        .collect::<Result<Vec<_>>>()?;
    let t = MultiPoly::var_named(&ring, "t")?;
    let gens = cyclic_product_generators(&mats, &t)?;
    let mut roles: BTreeMap<String, VarRole> = names.iter().map(|v| (v.clone(), VarRole::MatrixEntry)).collect();
    roles.insert("t".into(), VarRole::Parameter);
    Ok(ChartIdeal {
        ideal: PolyIdeal::new(&ring, gens)?,
        roles,
        inverses: Vec::new(),
        provenance: format!("faltings_mu(r={r},N={big_n})"),
    })
}

/// Chart frames for a local-model chart: `pivots[i]` are the r rows of the
/// frame of omega_i that carry the identity.
pub fn local_model_frames(ring: &Arc<Ring>, spec: &ChainSpec, pivots: &[Vec<usize>]) -> Result<Vec<PolyMatrix>> {
    let (n, r) = (spec.n, spec.r);
    let mut frames = Vec::new();
    for (i, piv) in pivots.iter().enumerate() {
        let mut m = PolyMatrix::zeros(ring, n, r);
        let mut other = 0;
        for row in 0..n {
            if let Some(c) = piv.iter().position(|&p| p == row) {
                m.set(row, c, MultiPoly::one(ring));
            } else {
                for c in 0..r {
                    m.set(row, c, MultiPoly::var_named(ring, &format!("M{i}_{}_{}", row + 1, c + 1))?);
                }
                other += 1;
            }
        }
        debug_assert_eq!(other, n - r);
        frames.push(m);
    }
    Ok(frames)
}

fn check_pivots(spec: &ChainSpec, pivots: &[Vec<usize>]) -> Result<()> {
    if pivots.len() != spec.big_n + 1 {
        return Err(Error::InvalidInput(format!("need {} pivot sets", spec.big_n + 1)));
    }
    for (i, p) in pivots.iter().enumerate() {
        if p.len() != spec.r || !strictly_increasing(p) || p.iter().any(|&x| x >= spec.n) {
            return Err(Error::InvalidInput(format!("pivot set {i} must be {} increasing rows < {}", spec.r, spec.n)));
        }
    }
    Ok(())
}

fn local_model_ring(spec: &ChainSpec, pivots: &[Vec<usize>], field: Field) -> Result<Arc<Ring>> {
    let mut names = Vec::new();
    for (i, piv) in pivots.iter().enumerate() {
        for row in 0..spec.n {
            if !piv.contains(&row) {
                for c in 0..spec.r {
                    names.push(format!("M{i}_{}_{}", row + 1, c + 1));
                }
            }
        }
    }
    names.push("t".into());
    Ring::new(&names, field, MonomialOrder::GrevLex)
}

/// Generators of the chain conditions `alpha_i(omega_i) ⊂ omega_{i-1}` as
/// (r+1)-minors of `[T^{d_i} M_i | M_{i-1}]` (cyclically).
fn chain_condition_generators(ring: &Arc<Ring>, spec: &ChainSpec, frames: &[PolyMatrix]) -> Result<Vec<MultiPoly>> {
    let m = spec.big_n + 1;
    let t = MultiPoly::var_named(ring, "t")?;
    let mut gens = Vec::new();
    for i in 0..m {
        let alpha = shift_matrix_power(ring, spec.n, spec.step(i), &t);
        let prev = &frames[(i + m - 1) % m];
        let block = alpha.mul(&frames[i])?.hstack(prev)?;
        gens.extend(block.minors(spec.r + 1)?.into_iter().filter(|p| !p.is_zero()));
    }
    Ok(gens)
}

pub fn local_model_ideal(spec: &ChainSpec, pivots: &[Vec<usize>]) -> Result<ChartIdeal> {
    local_model_ideal_over(spec, pivots, Field::Rational)
}

pub fn local_model_ideal_over(spec: &ChainSpec, pivots: &[Vec<usize>], field: Field) -> Result<ChartIdeal> {
    spec.validate()?;
    check_pivots(spec, pivots)?;
    let ring = local_model_ring(spec, pivots, field)?;
    let frames = local_model_frames(&ring, spec, pivots)?;
    let gens = chain_condition_generators(&ring, spec, &frames)?;
    let roles = ring.vars().iter().map(|v| (v.clone(), guess_role(v))).collect();
    Ok(ChartIdeal {
        ideal: PolyIdeal::new(&ring, gens)?,
        roles,
        inverses: Vec::new(),
        provenance: format!("local_model(n={},r={},d={:?};pivots={:?})", spec.n, spec.r, spec.d, pivots),
    })
}

/// All pivot choices for a local-model spec.
pub fn local_model_pivot_choices(spec: &ChainSpec) -> Vec<Vec<Vec<usize>>> {
    let subs = subsets(spec.n, spec.r);
    let mut out = vec![Vec::new()];
    for _ in 0..=spec.big_n {
        let mut next = Vec::new();
        for p in &out {
            for s in &subs {
                let mut q: Vec<Vec<usize>> = p.clone();
                q.push(s.clone());
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// The constant symplectic data: Delta, J and the two Gram matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymplecticData {
    pub g: usize,
    pub delta: IntMatrix,
    pub j: IntMatrix,
    /// Gram matrix of the form on V_0 (its standard basis).
    pub gram_0: IntMatrix,
    /// Gram matrix of t^{-1}<,> on the basis T^g e_k of V_N.
    pub gram_n: IntMatrix,
}

impl SymplecticData {
    pub fn new(g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidSpec("need g >= 1".into()));
        }
        let n = 2 * g;
        let mut delta = IntMatrix::zeros(g, g);
        for i in 0..g {
            delta.set(i, g - 1 - i, BigInt::from(1));
        }
        let mut j = IntMatrix::zeros(n, n);
        for a in 0..g {
            for b in 0..g {
                let v = delta.get(a, b).clone();
                j.set(a, g + b, -v.clone());
                j.set(g + a, b, v);
            }
        }
        // t^{-1} B^T J B with B = T^g, computed symbolically then divided by t
        let ring = Ring::new(&["t"], Field::Rational, MonomialOrder::GrevLex)?;
        let t = MultiPoly::var(&ring, 0);
        let b = shift_matrix_power(&ring, n, g, &t);
        let jp = int_to_poly(&ring, &j);
        let btjb = b.transpose().mul(&jp)?.mul(&b)?;
        let mut gram_n = IntMatrix::zeros(n, n);
        for a in 0..n {
            for c in 0..n {
                let q = btjb
                    .get(a, c)
                    .div_exact(&t)
                    .ok_or_else(|| Error::Inconsistent("Gram matrix on V_N is not divisible by t".into()))?;
                let val = match q.constant_value() {
                    Some(s) => Field::Rational.to_rational(&s),
                    None if q.is_zero() => num_rational::BigRational::from_integer(BigInt::from(0)),
                    None => return Err(Error::Inconsistent("Gram matrix on V_N depends on t".into())),
                };
                gram_n.set(a, c, val.to_integer());
            }
        }
        Ok(SymplecticData { g, delta, gram_0: j.clone(), j, gram_n })
    }

    /// `J^{-1}` (equal to `-J`).
    pub fn j_inverse(&self) -> IntMatrix {
        let n = 2 * self.g;
        let mut out = IntMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                out.set(a, b, -self.j.get(a, b).clone());
            }
        }
        out
    }
}

pub fn int_to_poly(ring: &Arc<Ring>, m: &IntMatrix) -> PolyMatrix {
    let f = ring.field();
    PolyMatrix::from_fn(ring, m.rows(), m.cols(), |i, j| MultiPoly::constant(ring, f.from_bigint(m.get(i, j))))
}

/// Strictly-upper entries of `M^T G M`.
fn isotropy_generators(ring: &Arc<Ring>, frame: &PolyMatrix, gram: &IntMatrix) -> Result<Vec<MultiPoly>> {
    let form = frame.transpose().mul(&int_to_poly(ring, gram))?.mul(frame)?;
    let mut out = Vec::new();
    for a in 0..form.rows() {
        for b in a + 1..form.cols() {
            let p = form.get(a, b).clone();
            if !p.is_zero() {
                out.push(p);
            }
        }
    }
    Ok(out)
}

pub fn symplectic_local_model_ideal(spec: &ChainSpec, pivots: &[Vec<usize>]) -> Result<ChartIdeal> {
    symplectic_local_model_ideal_over(spec, pivots, Field::Rational)
}

pub fn symplectic_local_model_ideal_over(spec: &ChainSpec, pivots: &[Vec<usize>], field: Field) -> Result<ChartIdeal> {
    if !spec.symplectic {
        return Err(Error::InvalidSpec("symplectic local model needs a symplectic spec".into()));
    }
    spec.validate()?;
    check_pivots(spec, pivots)?;
    let sd = SymplecticData::new(spec.g.expect("validated"))?;
    let ring = local_model_ring(spec, pivots, field)?;
    let frames = local_model_frames(&ring, spec, pivots)?;
    let mut gens = chain_condition_generators(&ring, spec, &frames)?;
    gens.extend(isotropy_generators(&ring, &frames[0], &sd.gram_0)?);
    gens.extend(isotropy_generators(&ring, &frames[spec.big_n], &sd.gram_n)?);
    let roles = ring.vars().iter().map(|v| (v.clone(), guess_role(v))).collect();
    Ok(ChartIdeal {
        ideal: PolyIdeal::new(&ring, gens)?,
        roles,
        inverses: Vec::new(),
        provenance: format!("symplectic_local_model(g={},d={:?};pivots={:?})", sd.g, spec.d, pivots),
    })
}

/// Pairing matrix `[[0, J1], [-J1^T, J3]]` with `J3` antisymmetric, over
/// variables `{tag}_1_{i}_{j}` and `{tag}_3_{i}_{j}` (i < j).
pub fn pairing_matrix(ring: &Arc<Ring>, g: usize, tag: &str) -> Result<PolyMatrix> {
    let mut m = PolyMatrix::zeros(ring, 2 * g, 2 * g);
    for i in 0..g {
        for j in 0..g {
            let v = MultiPoly::var_named(ring, &format!("{tag}_1_{}_{}", i + 1, j + 1))?;
            m.set(i, g + j, v.clone());
            m.set(g + j, i, -&v);
        }
    }
    for i in 0..g {
        for j in i + 1..g {
            let v = MultiPoly::var_named(ring, &format!("{tag}_3_{}_{}", i + 1, j + 1))?;
            m.set(g + i, g + j, v.clone());
            m.set(g + j, g + i, -&v);
        }
    }
    Ok(m)
}

fn pairing_names(g: usize, tag: &str) -> Vec<String> {
    let mut names = Vec::new();
    for i in 0..g {
        for j in 0..g {
            names.push(format!("{tag}_1_{}_{}", i + 1, j + 1));
        }
    }
    for i in 0..g {
        for j in i + 1..g {
            names.push(format!("{tag}_3_{}_{}", i + 1, j + 1));
        }
    }
    names
}

/// mu(2g, g, N) plus two unknown pairings on V_0 and V_N, the adjointness
/// relation and chart inverses of both pairing determinants.
pub fn sigma_ideal(g: usize, big_n: usize) -> Result<ChartIdeal> {
    if g < 1 || big_n < 1 {
        return Err(Error::InvalidSpec("need g >= 1 and N >= 1".into()));
    }
    let n = 2 * g;
    let base = mu_ideal(n, g, big_n)?;
    let mut names: Vec<String> = base.ring().vars().to_vec();
    names.extend(pairing_names(g, "J0"));
    names.extend(pairing_names(g, "JN"));
    names.push("y0".into());
    names.push("yN".into());
    let ring = Ring::new(&names, Field::Rational, MonomialOrder::GrevLex)?;
    let pis = pi_matrices(&ring, n, g, big_n)?;
    let j0 = pairing_matrix(&ring, g, "J0")?;
    let jn = pairing_matrix(&ring, g, "JN")?;
    let mut gens: Vec<MultiPoly> = base.gens().iter().map(|p| p.to_ring(&ring)).collect::<Result<_>>()?;
    let adj = adjointness_matrix(&pis, &j0, &jn)?;
    gens.extend(adj.entries().iter().filter(|p| !p.is_zero()).cloned());
    let mut inverses = Vec::new();
    for (y, j) in [("y0", &j0), ("yN", &jn)] {
        let det = j.det()?;
        gens.push(&(&MultiPoly::var_named(&ring, y)? * &det) - &MultiPoly::one(&ring));
        inverses.push((y.to_string(), det));
    }
    let roles = ring.vars().iter().map(|v| (v.clone(), guess_role(v))).collect();
    Ok(ChartIdeal {
        ideal: PolyIdeal::new(&ring, gens)?,
        roles,
        inverses,
        provenance: format!("sigma(g={g},N={big_n})"),
    })
}

/// `(Pi_0 ... Pi_{N-1})^T J[N] - J[0] Pi_N`
pub fn adjointness_matrix(pis: &[PolyMatrix], j0: &PolyMatrix, jn: &PolyMatrix) -> Result<PolyMatrix> {
    let big_n = pis.len() - 1;
    let mut prod = pis[0].clone();
    for p in &pis[1..big_n] {
        prod = prod.mul(p)?;
    }
    prod.transpose().mul(jn)?.sub(&j0.mul(&pis[big_n])?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalFormFailure {
    /// `Pi_i` has rank below `n - d_i`.
    RankDefect { index: usize, rank: usize, needed: usize },
    /// The cyclic products are not `tau * Id`.
    NotOnMu,
    /// The assembled frame is singular.
    SingularFrame { index: usize },
}

impl std::fmt::Display for NormalFormFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormalFormFailure::RankDefect { index, rank, needed } => {
                write!(f, "Pi{index} has rank {rank} < {needed}")
            }
            NormalFormFailure::NotOnMu => write!(f, "cyclic products differ from tau*Id"),
            NormalFormFailure::SingularFrame { index } => write!(f, "frame psi{index} is singular"),
        }
    }
}

fn cyclic_products_equal(point: &[FieldMatrix], tau: &Scalar) -> Result<bool> {
    let m = point.len();
    let f = point[0].field();
    let n = point[0].rows();
    let target = FieldMatrix::identity(f, n).scale(tau);
    for k in 0..m {
        let mut prod = point[k].clone();
        for s in 1..m {
            prod = prod.mul(&point[(k + s) % m])?;
        }
        if prod != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Frames psi_0..psi_N with `psi_{i-1}^{-1} Pi_i psi_i = T^{d_i}(tau)`
/// (indices mod N+1), or the reason none exists.
pub fn chain_normal_form(
    spec: &ChainSpec,
    point: &[FieldMatrix],
    tau: &Scalar,
) -> Result<std::result::Result<Vec<FieldMatrix>, NormalFormFailure>> {
    spec.validate()?;
    let m = spec.big_n + 1;
    let n = spec.n;
    if point.len() != m || point.iter().any(|p| p.rows() != n || p.cols() != n) {
        return Err(Error::InvalidInput(format!("need {m} matrices of size {n}x{n}")));
    }
    let f = point[0].field();
    for (i, p) in point.iter().enumerate() {
        let rank = p.rank();
        let needed = n - spec.step(i);
        if rank < needed {
            return Ok(Err(NormalFormFailure::RankDefect { index: i, rank, needed }));
        }
    }
    if !cyclic_products_equal(point, tau)? {
        return Ok(Err(NormalFormFailure::NotOnMu));
    }

    let psi: Vec<FieldMatrix> = if !f.is_zero(tau) {
        // every Pi_i is invertible: psi_0 = Id, psi_i = Pi_i^{-1} psi_{i-1} T^{d_i}
        let mut psi = vec![FieldMatrix::identity(f, n)];
        for i in 1..m {
            let inv = point[i].inverse()?;
            let next = inv.mul(&psi[i - 1])?.mul(&shift_matrix_at(f, n, spec.step(i), tau))?;
            psi.push(next);
        }
        psi
    } else {
        // lifts of cokernels: E_i spans a complement of im(Pi_i) in V_{i-1}
        let mut lifts: Vec<FieldMatrix> = Vec::with_capacity(m);
        for (i, p) in point.iter().enumerate() {
            let comp = p.image_complement();
            if comp.len() != spec.step(i) {
                return Ok(Err(NormalFormFailure::RankDefect { index: i, rank: n - comp.len(), needed: n - spec.step(i) }));
            }
            lifts.push(FieldMatrix::identity(f, n).columns(&comp));
        }
        // psi_{i-1} = [Pi_i...Pi_{i+N-1} E_{i+N} | ... | Pi_i E_{i+1} | E_i]
        let mut psi = vec![FieldMatrix::zeros(f, n, 0); m];
        for i in 0..m {
            let prev = (i + m - 1) % m;
            let mut blocks: Vec<FieldMatrix> = Vec::with_capacity(m);
            let mut acc = FieldMatrix::identity(f, n);
            for k in 0..m {
                let idx = (i + k) % m;
                blocks.push(acc.mul(&lifts[idx])?);
                acc = acc.mul(&point[idx])?;
            }
            let mut frame = FieldMatrix::zeros(f, n, 0);
            for b in blocks.iter().rev() {
                frame = frame.hstack(b);
            }
            psi[prev] = frame;
        }
        psi
    };
    for (i, p) in psi.iter().enumerate() {
        if p.rank() < n {
            return Ok(Err(NormalFormFailure::SingularFrame { index: i }));
        }
    }
    if !verify_normal_form(spec, point, tau, &psi)? {
        return Err(Error::Inconsistent("normal form failed its own verification".into()));
    }
    Ok(Ok(psi))
}

/// Exact check of `Pi_i psi_i = psi_{i-1} T^{d_i}(tau)` for every i.
pub fn verify_normal_form(spec: &ChainSpec, point: &[FieldMatrix], tau: &Scalar, psi: &[FieldMatrix]) -> Result<bool> {
    let m = spec.big_n + 1;
    let f = point[0].field();
    for i in 0..m {
        let lhs = point[i].mul(&psi[i])?;
        let rhs = psi[(i + m - 1) % m].mul(&shift_matrix_at(f, spec.n, spec.step(i), tau))?;
        if lhs != rhs || psi[i].rank() < spec.n {
            return Ok(false);
        }
    }
    Ok(true)
}

fn largest_pi_index(ring: &Ring) -> Option<usize> {
    ring.vars().iter().filter_map(|v| parse_pi_name(v)).map(|(i, _, _)| i).max()
}

/// Substitutes `Pi_i -> Pi_{i+s}` (indices mod N+1).
pub fn apply_cyclic_shift(ci: &ChartIdeal, s: i64) -> Result<ChartIdeal> {
    let ring = ci.ring().clone();
    let m = largest_pi_index(&ring).ok_or_else(|| Error::InvalidInput("no Pi variables".into()))? + 1;
    let shift = s.rem_euclid(m as i64) as usize;
    let mut images = vec![None; ring.nvars()];
    for (k, name) in ring.vars().iter().enumerate() {
        if let Some((i, row, col)) = parse_pi_name(name) {
            let target = format!("Pi{}_{}_{}", (i + shift) % m, row + 1, col + 1);
            images[k] = Some(MultiPoly::var_named(&ring, &target)?);
        }
    }
    let gens = ci.gens().iter().map(|g| g.substitute(&ring, &images)).collect::<Result<Vec<_>>>()?;
    Ok(ci.with_ideal(PolyIdeal::new(&ring, gens)?, format!("{} | shift {shift}", ci.provenance)))
}

/// `sigma(0) = 0`, `sigma(i) = N+1-i`.
pub fn symplectic_sigma(big_n: usize, i: usize) -> usize {
    if i == 0 { 0 } else { big_n + 1 - i }
}

/// Substitutes `Pi_i -> J^{-1} Pi_{sigma(i)}^T J` on an ideal in the
/// variables of mu(2g, g, N).
pub fn apply_symplectic_involution(ci: &ChartIdeal, g: usize) -> Result<ChartIdeal> {
    let ring = ci.ring().clone();
    let n = 2 * g;
    let big_n = largest_pi_index(&ring).ok_or_else(|| Error::InvalidInput("no Pi variables".into()))?;
    let sd = SymplecticData::new(g)?;
    let j = int_to_poly(&ring, &sd.j);
    let jinv = int_to_poly(&ring, &sd.j_inverse());
    let shape = ParabolicShape { n, r: g };
    let pis = pi_matrices(&ring, n, g, big_n)?;
    let mut images = vec![None; ring.nvars()];
    for i in 0..=big_n {
        let img = jinv.mul(&pis[symplectic_sigma(big_n, i)].transpose())?.mul(&j)?;
        if !shape.contains(&img) {
            return Err(Error::ShapeViolation(format!("image of Pi{i} leaves the parabolic shape")));
        }
        for (row, col) in shape.positions() {
            let k = ring
                .var_index(&format!("Pi{i}_{}_{}", row + 1, col + 1))
                .ok_or_else(|| Error::InvalidInput("ideal is not over the mu variables".into()))?;
            images[k] = Some(img.get(row, col).clone());
        }
    }
    let gens = ci.gens().iter().map(|p| p.substitute(&ring, &images)).collect::<Result<Vec<_>>>()?;
    Ok(ci.with_ideal(PolyIdeal::new(&ring, gens)?, format!("{} | symplectic involution", ci.provenance)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_powers() {
        let t3 = shift_matrix_power_t(3, 3).unwrap();
        let ring = t3.ring().clone();
        let t = MultiPoly::var(&ring, 0);
        assert_eq!(t3, PolyMatrix::scalar_identity(&ring, 3, &t));
        let t1 = shift_matrix_power_t(2, 1).unwrap();
        assert_eq!(t1.get(0, 1), &MultiPoly::one(&ring));
        assert_eq!(t1.get(1, 0), &t);
        assert!(t1.get(0, 0).is_zero() && t1.get(1, 1).is_zero());
        assert_eq!(shift_matrix_power_t(4, 0).unwrap(), PolyMatrix::identity(&ring, 4));
    }

    #[test]
    fn mu_2_1_1_generators() {
        let mu = mu_ideal(2, 1, 1).unwrap();
        assert_eq!(mu.ring().nvars(), 7);
        let g: Vec<String> = mu.gens().iter().map(|p| p.to_string()).collect();
        assert_eq!(g.len(), 4, "{g:?}");
    }

    #[test]
    fn pi_names_roundtrip() {
        assert_eq!(parse_pi_name("Pi2_1_3"), Some((2, 0, 2)));
        assert_eq!(parse_pi_name("Pi2_0_3"), None);
        assert_eq!(parse_pi_name("Pix_1_1"), None);
    }

    #[test]
    fn local_model_example() {
        let spec = ChainSpec::unitary(2, 1, vec![1, 1]).unwrap();
        let lm = local_model_ideal(&spec, &[vec![0], vec![0]]).unwrap();
        assert_eq!(lm.ring().nvars(), 3);
        assert_eq!(lm.gens().len(), 2);
        assert!(local_model_ideal(&spec, &[vec![2], vec![0]]).is_err());
    }

    #[test]
    fn gram_matrices() {
        let sd = SymplecticData::new(2).unwrap();
        assert_eq!(sd.gram_n.det().unwrap().magnitude(), &num_bigint::BigUint::from(1u32));
        assert_eq!(sd.gram_0.det().unwrap().magnitude(), &num_bigint::BigUint::from(1u32));
        let jt = sd.j.transpose();
        assert_eq!(jt, sd.j_inverse());
    }

    #[test]
    fn spec_validation() {
        assert!(ChainSpec::unitary(3, 1, vec![1, 2]).is_ok());
        assert!(ChainSpec::unitary(3, 1, vec![1, 1]).is_err());
        assert!(ChainSpec::unitary(2, 2, vec![1, 1]).is_err());
        let s = ChainSpec::symplectic(2, vec![1, 1]).unwrap();
        assert_eq!(s.d, vec![1, 1, 2]);
        assert_eq!(s.step(0), 2);
    }
}
