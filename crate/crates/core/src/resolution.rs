//! Blowup charts, t-torsion killing, the diagonal chart and the
//! free-coordinate census of the symplectic fibre.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Field, FieldMatrix, MonomialOrder, MultiPoly, PolyIdeal, PolyMatrix, Ring};
use crate::error::{Error, Result};
use crate::schemes::{self, ChartIdeal, VarRole};

#[derive(Clone, Debug)]
pub struct BlowupChart {
    pub base: ChartIdeal,
    pub center: Vec<MultiPoly>,
    pub chart: usize,
    /// `(u_j, j)`: ratio variable for the j-th center generator.
    pub ratios: Vec<(String, usize)>,
    /// Chart ideal after saturation by the chart generator.
    pub result: ChartIdeal,
    pub saturated: bool,
    pub empty: bool,
}

impl BlowupChart {
    /// The chart generator in the chart ring.
    pub fn chart_generator(&self) -> Result<MultiPoly> {
        self.center[self.chart].to_ring(self.result.ring())
    }

    /// Every center generator is a multiple of the chart generator modulo
    /// the chart ideal, and the chart generator is a nonzerodivisor.
    pub fn principal_certificate(&self) -> Result<bool> {
        if self.empty {
            return Ok(true);
        }
        let ring = self.result.ring();
        let fk = self.chart_generator()?;
        for (u, j) in &self.ratios {
            let fj = self.center[*j].to_ring(ring)?;
            let rel = &fj - &(&MultiPoly::var_named(ring, u)? * &fk);
            if !self.result.ideal.contains(&rel)? {
                return Ok(false);
            }
        }
        let colon = self.result.ideal.quotient(&fk)?;
        self.result.ideal.same_ideal(&colon)
    }
}

/// k-th standard chart of the blowup of V(I) along (center): adds
/// `f_j - u_j f_k` for j != k and saturates by `f_k`.
pub fn blowup_chart(base: &ChartIdeal, center: &[MultiPoly], k: usize) -> Result<BlowupChart> {
    if k >= center.len() {
        return Err(Error::InvalidInput(format!("chart index {k} out of range")));
    }
    let ring0 = base.ring();
    let mut names: Vec<String> = ring0.vars().to_vec();
    let mut ratios = Vec::new();
    for j in 0..center.len() {
        if j == k {
            continue;
        }
        let probe = Ring::new(&names, ring0.field(), ring0.order())?;
        let u = probe.fresh_name(&format!("u{j}_"));
        names.push(u.clone());
        ratios.push((u, j));
    }
    let ring = Ring::new(&names, ring0.field(), ring0.order())?;
    let fk = center[k].to_ring(&ring)?;
    let mut gens: Vec<MultiPoly> = base.gens().iter().map(|g| g.to_ring(&ring)).collect::<Result<_>>()?;
    for (u, j) in &ratios {
        let fj = center[*j].to_ring(&ring)?;
        gens.push(&fj - &(&MultiPoly::var_named(&ring, u)? * &fk));
    }
    let ideal = PolyIdeal::new(&ring, gens)?.with_config(base.ideal.config());
    let sat = ideal.saturate(&fk)?;
    let empty = sat.contains_one()?;
    let mut roles = base.roles.clone();
    for (u, _) in &ratios {
        roles.insert(u.clone(), VarRole::Auxiliary);
    }
    let result = ChartIdeal {
        ideal: sat,
        roles,
        inverses: base.inverses.clone(),
        provenance: format!("{} | blowup chart {k} of {}", base.provenance, center.len()),
    };
    Ok(BlowupChart { base: base.clone(), center: center.to_vec(), chart: k, ratios, result, saturated: true, empty })
}

/// `(I : t^inf)`
pub fn kill_t_torsion(ci: &ChartIdeal) -> Result<ChartIdeal> {
    let t = MultiPoly::var_named(ci.ring(), "t")
        .map_err(|_| Error::InvalidInput("ideal has no parameter t".into()))?;
    let sat = ci.ideal.saturate(&t)?;
    Ok(ci.with_ideal(sat, format!("{} | t-saturated", ci.provenance)))
}

/// t is a nonzerodivisor modulo the ideal: `(I : t) = I`.
pub fn t_regular(ci: &ChartIdeal) -> Result<bool> {
    let t = MultiPoly::var_named(ci.ring(), "t")?;
    ci.ideal.same_ideal(&ci.ideal.quotient(&t)?)
}

#[derive(Clone, Debug)]
pub struct DiagonalChartData {
    pub g: usize,
    pub ring: Arc<Ring>,
    /// `diag(a_0, a_0 a_1, ..., a_0...a_{g-1})`
    pub a_n: PolyMatrix,
    /// `diag(a_1...a_g, a_2...a_g, ..., a_g)`
    pub a_n_prime: PolyMatrix,
    pub pi_n: PolyMatrix,
    pub pi_n_prime: PolyMatrix,
    /// `a_0 a_1 ... a_g - t`
    pub relation: MultiPoly,
}

fn a_product(ring: &Arc<Ring>, lo: usize, hi: usize) -> MultiPoly {
    let mut p = MultiPoly::one(ring);
    for k in lo..hi {
        p = &p * &MultiPoly::var_named(ring, &format!("a{k}")).expect("a variable");
    }
    p
}

pub fn diagonal_chart_ideals(g: usize) -> Result<DiagonalChartData> {
    if g < 1 {
        return Err(Error::InvalidSpec("need g >= 1".into()));
    }
    let mut names: Vec<String> = (0..=g).map(|k| format!("a{k}")).collect();
    names.push("t".into());
    let ring = Ring::new(&names, Field::Rational, MonomialOrder::GrevLex)?;
    let a_n = PolyMatrix::from_fn(&ring, g, g, |i, j| if i == j { a_product(&ring, 0, i + 1) } else { MultiPoly::zero(&ring) });
    let a_n_prime =
        PolyMatrix::from_fn(&ring, g, g, |i, j| if i == j { a_product(&ring, i + 1, g + 1) } else { MultiPoly::zero(&ring) });
    let id = PolyMatrix::identity(&ring, g);
    let zero = PolyMatrix::zeros(&ring, g, g);
    let pi_n = PolyMatrix::blocks(&a_n, &id, &zero, &a_n_prime.neg())?;
    let pi_n_prime = PolyMatrix::blocks(&a_n_prime, &id, &zero, &a_n.neg())?;
    let relation = &a_product(&ring, 0, g + 1) - &MultiPoly::var_named(&ring, "t")?;
    Ok(DiagonalChartData { g, ring, a_n, a_n_prime, pi_n, pi_n_prime, relation })
}

impl DiagonalChartData {
    /// Both products minus `t Id`, reduced modulo `a_0...a_g - t`.
    pub fn product_residues(&self) -> Result<Vec<MultiPoly>> {
        let rel = PolyIdeal::new(&self.ring, vec![self.relation.clone()])?;
        let t = MultiPoly::var_named(&self.ring, "t")?;
        let tid = PolyMatrix::scalar_identity(&self.ring, 2 * self.g, &t);
        let mut out = Vec::new();
        for prod in [self.pi_n.mul(&self.pi_n_prime)?, self.pi_n_prime.mul(&self.pi_n)?] {
            for e in prod.sub(&tid)?.entries() {
                out.push(rel.reduce(e)?);
            }
        }
        Ok(out)
    }

    pub fn products_hold(&self) -> Result<bool> {
        Ok(self.product_residues()?.iter().all(|p| p.is_zero()))
    }

    /// For each size i, every i-minor of A_N is a multiple of the first one
    /// (the product of the first i diagonal entries): the minors ideal is
    /// principal and monomial.
    pub fn minors_principal(&self) -> Result<Vec<(usize, MultiPoly)>> {
        let mut out = Vec::new();
        for i in 1..=self.g {
            let minors = self.a_n.minors(i)?;
            let gen = (0..i).fold(MultiPoly::one(&self.ring), |acc, k| &acc * self.a_n.get(k, k));
            for m in &minors {
                if !m.is_zero() && m.div_exact(&gen).is_none() {
                    return Err(Error::Inconsistent(format!("minor {m} not divisible by {gen}")));
                }
            }
            out.push((i, gen));
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationFamily {
    /// `J1[0]^i_j + a_i...a_{j-1} J1[N]^i_j`, i <= j
    First,
    /// `J1[N]^i_j + a_j...a_{i-1} J1[0]^i_j`, j <= i
    Second,
    /// `J1[N]^i_j + J1[0]^j_i - a_0...a_{i-1} J3[N]^i_j + a_j...a_g J3[0]^i_j`, i <= j
    Third,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationStatus {
    Eliminated,
    /// Already a consequence of earlier eliminations.
    Redundant,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationLogEntry {
    pub family: RelationFamily,
    pub i: usize,
    pub j: usize,
    pub status: RelationStatus,
    pub eliminated: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SigmaFiberReport {
    pub g: usize,
    pub free_count: usize,
    pub free_coordinates: Vec<String>,
    pub log: Vec<RelationLogEntry>,
    /// All relations reduce to zero after the substitutions.
    pub consistent: bool,
}

impl SigmaFiberReport {
    pub fn consumed(&self, family: RelationFamily) -> usize {
        self.log.iter().filter(|e| e.family == family).count()
    }
}

struct FiberSystem {
    ring: Arc<Ring>,
    g: usize,
}

impl FiberSystem {
    fn new(g: usize, field: Field) -> Result<Self> {
        let mut names: Vec<String> = (0..=g).map(|k| format!("a{k}")).collect();
        for tag in ["J0", "JN"] {
            for i in 1..=g {
                for j in 1..=g {
                    names.push(format!("{tag}_1_{i}_{j}"));
                }
            }
            for i in 1..=g {
                for j in i + 1..=g {
                    names.push(format!("{tag}_3_{i}_{j}"));
                }
            }
        }
        Ok(FiberSystem { ring: Ring::new(&names, field, MonomialOrder::GrevLex)?, g })
    }

    fn var(&self, name: &str) -> MultiPoly {
        MultiPoly::var_named(&self.ring, name).expect("declared")
    }

    /// Antisymmetric J3 entry (zero on the diagonal).
    fn j3(&self, tag: &str, i: usize, j: usize) -> MultiPoly {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => MultiPoly::zero(&self.ring),
            Less => self.var(&format!("{tag}_3_{i}_{j}")),
            Greater => -&self.var(&format!("{tag}_3_{j}_{i}")),
        }
    }

    fn a(&self, lo: usize, hi: usize) -> MultiPoly {
        a_product(&self.ring, lo, hi)
    }

    fn relation(&self, fam: RelationFamily, i: usize, j: usize) -> MultiPoly {
        let g = self.g;
        match fam {
            RelationFamily::First => {
                &self.var(&format!("J0_1_{i}_{j}")) + &(&self.a(i, j) * &self.var(&format!("JN_1_{i}_{j}")))
            }
            RelationFamily::Second => {
                &self.var(&format!("JN_1_{i}_{j}")) + &(&self.a(j, i) * &self.var(&format!("J0_1_{i}_{j}")))
            }
            RelationFamily::Third => {
                let s = &self.var(&format!("JN_1_{i}_{j}")) + &self.var(&format!("J0_1_{j}_{i}"));
                let s = &s - &(&self.a(0, i) * &self.j3("JN", i, j));
                &s + &(&self.a(j, g + 1) * &self.j3("J0", i, j))
            }
        }
    }

    /// Relations in the order the census consumes them.
    fn ordered(&self) -> Vec<(RelationFamily, usize, usize, Option<String>)> {
        let g = self.g;
        let mut out = Vec::new();
        for i in 1..=g {
            for j in i..=g {
                out.push((RelationFamily::First, i, j, Some(format!("J0_1_{i}_{j}"))));
            }
        }
        for i in 1..=g {
            for j in 1..=i {
                let target = if j < i { Some(format!("JN_1_{i}_{j}")) } else { None };
                out.push((RelationFamily::Second, i, j, target));
            }
        }
        for i in 1..=g {
            for j in i..=g {
                let target = if i < j { Some(format!("J0_1_{j}_{i}")) } else { None };
                out.push((RelationFamily::Third, i, j, target));
            }
        }
        out
    }
}

/// Eliminates in the fixed order (J1[0] for i <= j and J1[N] for i > j via
/// the first two families, the remaining J1[0] via the third) by exact
/// substitution, then counts the surviving coordinates.
pub fn sigma_fiber_freecount(g: usize) -> Result<SigmaFiberReport> {
    if g < 1 {
        return Err(Error::InvalidSpec("need g >= 1".into()));
    }
    let sys = FiberSystem::new(g, Field::Rational)?;
    let ring = sys.ring.clone();
    let n = ring.nvars();
    // images[k] = current expression of variable k in the surviving ones
    let mut images: Vec<MultiPoly> = (0..n).map(|k| MultiPoly::var(&ring, k)).collect();
    let apply = |p: &MultiPoly, images: &[MultiPoly]| -> Result<MultiPoly> {
        let im: Vec<Option<MultiPoly>> = images.iter().cloned().map(Some).collect();
        p.substitute(&ring, &im)
    };
    let mut log = Vec::new();
    let mut eliminated: Vec<usize> = Vec::new();
    for (fam, i, j, target) in sys.ordered() {
        let rel = apply(&sys.relation(fam, i, j), &images)?;
        match target {
            Some(name) => {
                let k = ring.var_index(&name).expect("declared");
                // the relation is `x_k + rest` with x_k absent from rest
                if rel.degree_in(k) != 1 || rel.derivative(k) != MultiPoly::one(&ring) {
                    return Err(Error::Inconsistent(format!("cannot solve {fam:?}({i},{j}) for {name}")));
                }
                let sol = &MultiPoly::var(&ring, k) - &rel;
                let mut single: Vec<Option<MultiPoly>> = vec![None; n];
                single[k] = Some(sol);
                for img in images.iter_mut() {
                    *img = img.substitute(&ring, &single)?;
                }
                eliminated.push(k);
                log.push(RelationLogEntry { family: fam, i, j, status: RelationStatus::Eliminated, eliminated: Some(name) });
            }
            None => {
                if !rel.is_zero() {
                    return Err(Error::Inconsistent(format!("{fam:?}({i},{j}) is not implied: {rel}")));
                }
                log.push(RelationLogEntry { family: fam, i, j, status: RelationStatus::Redundant, eliminated: None });
            }
        }
    }
    let mut consistent = true;
    for (fam, i, j, _) in sys.ordered() {
        if !apply(&sys.relation(fam, i, j), &images)?.is_zero() {
            consistent = false;
        }
    }
    let free_coordinates: Vec<String> = ring
        .vars()
        .iter()
        .enumerate()
        .filter(|(k, v)| v.starts_with('J') && !eliminated.contains(k))
        .map(|(_, v)| v.clone())
        .collect();
    Ok(SigmaFiberReport { g, free_count: free_coordinates.len(), free_coordinates, log, consistent })
}

/// Solution dimension of the untwisted matrix relations
/// `A'J1[N] + J1[0]A' = 0`, `J1[N]A + AJ1[0] = 0`,
/// `J1[N] - A J3[N] + J1[0]^T + J3[0]A' = 0` at random nonzero a's over F_p.
pub fn sigma_fiber_linear_dimension(g: usize, p: u32, seed: u64) -> Result<usize> {
    let field = Field::prime(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<_> = (0..=g).map(|_| field.from_i64(rng.gen_range(1..p as i64))).collect();
    let prod = |lo: usize, hi: usize| (lo..hi).fold(field.one(), |acc, k| field.mul(&acc, &a[k]));
    let an: Vec<_> = (0..g).map(|i| prod(0, i + 1)).collect();
    let anp: Vec<_> = (0..g).map(|i| prod(i + 1, g + 1)).collect();
    // unknowns: J1[0] (g^2), J1[N] (g^2), J3[0] (i<j), J3[N] (i<j)
    let pairs: Vec<(usize, usize)> = (0..g).flat_map(|i| (i + 1..g).map(move |j| (i, j))).collect();
    let nu = 2 * g * g + 2 * pairs.len();
    let j10 = |i: usize, j: usize| i * g + j;
    let j1n = |i: usize, j: usize| g * g + i * g + j;
    let j3 = |off: usize, i: usize, j: usize| -> Option<(usize, i64)> {
        if i == j {
            None
        } else if i < j {
            Some((off + pairs.iter().position(|&q| q == (i, j)).unwrap(), 1))
        } else {
            Some((off + pairs.iter().position(|&q| q == (j, i)).unwrap(), -1))
        }
    };
    let (off0, offn) = (2 * g * g, 2 * g * g + pairs.len());
    let mut rows: Vec<Vec<crate::algebra::Scalar>> = Vec::new();
    let mut push = |terms: Vec<(usize, crate::algebra::Scalar)>| {
        let mut row = vec![field.zero(); nu];
        for (k, c) in terms {
            row[k] = field.add(&row[k], &c);
        }
        rows.push(row);
    };
    for i in 0..g {
        for j in 0..g {
            push(vec![(j1n(i, j), anp[i].clone()), (j10(i, j), anp[j].clone())]);
            push(vec![(j1n(i, j), an[j].clone()), (j10(i, j), an[i].clone())]);
            let mut t = vec![(j1n(i, j), field.one()), (j10(j, i), field.one())];
            if let Some((k, s)) = j3(offn, i, j) {
                t.push((k, field.neg(&field.mul(&field.from_i64(s), &an[i]))));
            }
            if let Some((k, s)) = j3(off0, i, j) {
                t.push((k, field.mul(&field.from_i64(s), &anp[j])));
            }
            push(t);
        }
    }
    let m = FieldMatrix::from_fn(field, rows.len(), nu, |i, j| rows[i][j].clone());
    Ok(nu - m.rank())
}

/// Gröbner cross-check: dimension of the relation ideal over the Laurent
/// a-chart equals (g + 1) + g(3g - 1)/2.
pub fn sigma_fiber_groebner_dimension(g: usize) -> Result<i64> {
    let sys = FiberSystem::new(g, Field::Rational)?;
    let mut names: Vec<String> = sys.ring.vars().to_vec();
    for k in 0..=g {
        names.push(format!("b{k}"));
    }
    let ring = Ring::new(&names, Field::Rational, MonomialOrder::GrevLex)?;
    let mut gens = Vec::new();
    for (fam, i, j, _) in sys.ordered() {
        gens.push(sys.relation(fam, i, j).to_ring(&ring)?);
    }
    for k in 0..=g {
        let ak = MultiPoly::var_named(&ring, &format!("a{k}"))?;
        let bk = MultiPoly::var_named(&ring, &format!("b{k}"))?;
        gens.push(&(&ak * &bk) - &MultiPoly::one(&ring));
    }
    PolyIdeal::new(&ring, gens)?.dimension()
}

/// The diagonal tower at rank g: mu(2g, g, 1) blown up along the 1..g-1
/// minors of A_N (upper-left block of Pi_1) and then of A'_N (upper-left
/// block of Pi_0), keeping every chart.
pub fn diagonal_tower(g: usize) -> Result<Vec<BlowupChart>> {
    let base = schemes::mu_ideal(2 * g, g, 1)?;
    let ring = base.ring().clone();
    let pis = schemes::pi_matrices(&ring, 2 * g, g, 1)?;
    let blocks: Vec<PolyMatrix> = [1usize, 0]
        .iter()
        .map(|&i| pis[i].submatrix(&(0..g).collect::<Vec<_>>(), &(0..g).collect::<Vec<_>>()))
        .collect();
    let mut stage: Vec<ChartIdeal> = vec![base];
    let mut all = Vec::new();
    for a in &blocks {
        for size in 1..g {
            let center = a.minors(size)?;
            let mut next = Vec::new();
            for ci in &stage {
                for k in 0..center.len() {
                    let ch = blowup_chart(ci, &center, k)?;
                    if !ch.empty {
                        next.push(ch.result.clone());
                    }
                    all.push(ch);
                }
            }
            stage = next;
        }
    }
    Ok(all)
}

/// Summary counts for a tower: (charts, nonempty charts, principal).
pub fn tower_summary(charts: &[BlowupChart]) -> Result<(usize, usize, usize)> {
    let mut nonempty = 0;
    let mut principal = 0;
    for c in charts {
        if !c.empty {
            nonempty += 1;
            if c.principal_certificate()? {
                principal += 1;
            }
        }
    }
    Ok((charts.len(), nonempty, principal))
}

pub fn relation_log_table(report: &SigmaFiberReport) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for e in &report.log {
        *m.entry(format!("{:?}", e.family)).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(vars: &[&str], gens: &[&str]) -> ChartIdeal {
        let ring = Ring::new(vars, Field::Rational, MonomialOrder::GrevLex).unwrap();
        ChartIdeal {
            ideal: PolyIdeal::parse(&ring, gens).unwrap(),
            roles: BTreeMap::new(),
            inverses: vec![],
            provenance: "test".into(),
        }
    }

    #[test]
    fn torsion_examples() {
        let c = kill_t_torsion(&chart(&["x", "t"], &["t*x"])).unwrap();
        assert_eq!(c.ideal.reduced().unwrap().gens().iter().map(|p| p.to_string()).collect::<Vec<_>>(), vec!["x"]);
        let c = kill_t_torsion(&chart(&["x", "t"], &["t^2"])).unwrap();
        assert!(c.ideal.contains_one().unwrap());
        let c = kill_t_torsion(&chart(&["x", "t"], &["x"])).unwrap();
        assert!(t_regular(&c).unwrap());
    }

    #[test]
    fn plane_blowup() {
        let base = chart(&["x", "y"], &[]);
        let ring = base.ring().clone();
        let center = vec![ring.parse("x").unwrap(), ring.parse("y").unwrap()];
        let ch = blowup_chart(&base, &center, 0).unwrap();
        assert!(!ch.empty);
        assert_eq!(ch.result.gens().len(), 1);
        assert!(ch.principal_certificate().unwrap());
        let zero_center = vec![ring.parse("x").unwrap(), ring.parse("0").unwrap()];
        assert!(blowup_chart(&base, &zero_center, 1).unwrap().empty);
    }

    #[test]
    fn diagonal_products() {
        for g in 1..=3 {
            let d = diagonal_chart_ideals(g).unwrap();
            assert!(d.products_hold().unwrap());
            assert_eq!(d.minors_principal().unwrap().len(), g);
        }
    }

    #[test]
    fn fiber_counts() {
        for (g, want) in [(1, 1), (2, 5), (3, 12)] {
            let r = sigma_fiber_freecount(g).unwrap();
            assert_eq!(r.free_count, want);
            assert!(r.consistent);
        }
    }
}
