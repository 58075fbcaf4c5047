//! Index set S^{P,N}, the characters pi_i / delta_i, the central embedding
//! and the torus-kernel criteria; plus the open-cell parametrisation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::intmat::{self, snf, IntMatrix, SnfResult};
use crate::algebra::{Field, FieldMatrix, MonomialOrder, MultiPoly, PolyIdeal, PolyMatrix, Ring, Scalar};
use crate::error::{Error, Result};
use crate::schemes;

/// One element of S: `N+1` pairs `(i_{a,1}, i_{a,2})`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IndexElem {
    pub pairs: Vec<(u32, u32)>,
}

impl IndexElem {
    pub fn new(pairs: Vec<(u32, u32)>) -> Self {
        IndexElem { pairs }
    }

    /// `|s|_a`
    pub fn degree(&self, slot: usize) -> u32 {
        let (a, b) = self.pairs[slot];
        a + b
    }

    pub fn total(&self) -> u32 {
        self.pairs.iter().map(|(a, b)| a + b).sum()
    }

    pub fn first_sum(&self) -> u32 {
        self.pairs.iter().map(|(a, _)| a).sum()
    }

    pub fn is_member(&self, n: u32, r: u32, big_n: usize) -> bool {
        self.pairs.len() == big_n + 1 && self.total() == n && self.first_sum() >= r
    }

    fn flat(&self) -> Vec<u32> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

impl fmt::Display for IndexElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn check_spec(n: u32, r: u32, big_n: usize) -> Result<()> {
    if r < 1 || r + 1 > n {
        return Err(Error::InvalidSpec(format!("need 1 <= r <= n-1, got n={n}, r={r}")));
    }
    if big_n < 1 {
        return Err(Error::InvalidSpec("need N >= 1".into()));
    }
    Ok(())
}

/// All of S^{P,N}, sorted lexicographically on the flattened tuple.
pub fn enumerate_index_set(n: u32, r: u32, big_n: usize) -> Result<Vec<IndexElem>> {
    check_spec(n, r, big_n)?;
    let parts = 2 * (big_n + 1);
    let mut out = Vec::new();
    let mut cur = vec![0u32; parts];
    // compositions of n into `parts` nonnegative parts, lex order
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
    }
    let mut flat = Vec::new();
    rec(0, n, &mut cur, &mut flat);
    for f in flat {
        let e = IndexElem::new(f.chunks(2).map(|c| (c[0], c[1])).collect());
        if e.first_sum() >= r {
            out.push(e);
        }
    }
    out.sort_by_key(|e| e.flat());
    Ok(out)
}

/// The partial order on S: same slot degrees and coordinatewise smaller
/// first entries.
pub fn leq(a: &IndexElem, b: &IndexElem) -> Result<bool> {
    if a.pairs.len() != b.pairs.len() {
        return Err(Error::InvalidInput("index elements of different length".into()));
    }
    Ok(a.pairs.iter().zip(&b.pairs).all(|(x, y)| x.0 + x.1 == y.0 + y.1 && x.0 <= y.0))
}

/// `(pi_i, delta_i)`; slots taken mod N+1.
pub fn pi_delta(n: u32, big_n: usize, i: usize) -> (IndexElem, IndexElem) {
    let m = big_n + 1;
    let (s0, s1) = (i % m, (i + 1) % m);
    let mut pi = vec![(0, 0); m];
    let mut delta = vec![(0, 0); m];
    pi[s0].0 += 1;
    pi[s1].0 += n - 1;
    delta[s1].0 += n;
    (IndexElem::new(pi), IndexElem::new(delta))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterData {
    pub n: u32,
    pub r: u32,
    pub big_n: usize,
    pub s: Vec<IndexElem>,
    pub pi: Vec<IndexElem>,
    pub delta: Vec<IndexElem>,
    pub center_embedding: IntMatrix,
    pub subtorus_relations: IntMatrix,
    pub chi: Vec<BigInt>,
}

impl CharacterData {
    pub fn new(n: u32, r: u32, big_n: usize) -> Result<Self> {
        let s = enumerate_index_set(n, r, big_n)?;
        let pos: BTreeMap<&IndexElem, usize> = s.iter().enumerate().map(|(k, e)| (e, k)).collect();
        let m = big_n + 1;
        let (mut pi, mut delta) = (Vec::new(), Vec::new());
        let mut rel = IntMatrix::zeros(m, s.len());
        let mut chi = vec![BigInt::zero(); s.len()];
        for i in 0..m {
            let (p, d) = pi_delta(n, big_n, i);
            let (Some(&kp), Some(&kd)) = (pos.get(&p), pos.get(&d)) else {
                return Err(Error::Inconsistent(format!("pi_{i} or delta_{i} is not in S")));
            };
            rel.set(i, kp, rel.get(i, kp) + 1);
            rel.set(i, kd, rel.get(i, kd) - 1);
            chi[kp] += 1;
            chi[kd] -= 1;
            pi.push(p);
            delta.push(d);
        }
        let mut emb = IntMatrix::zeros(s.len(), m);
        for (k, e) in s.iter().enumerate() {
            emb.set(k, 0, BigInt::one());
            for beta in 1..m {
                emb.set(k, beta, -BigInt::from(e.degree(beta)));
            }
        }
        Ok(CharacterData { n, r, big_n, s, pi, delta, center_embedding: emb, subtorus_relations: rel, chi })
    }

    pub fn index_of(&self, e: &IndexElem) -> Option<usize> {
        self.s.binary_search_by(|x| x.flat().cmp(&e.flat())).ok()
    }

    /// Character lattice of G_m^S / G_m^{N+1}, as rows.
    pub fn character_lattice(&self) -> IntMatrix {
        intmat::saturated_kernel(&self.center_embedding.transpose())
    }
}

pub fn center_embedding_matrix(data: &CharacterData) -> IntMatrix {
    data.center_embedding.clone()
}

pub fn chi_vector(data: &CharacterData) -> Vec<BigInt> {
    data.chi.clone()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorusCertificate {
    /// Basis of the ambient character lattice (rows).
    pub lattice: IntMatrix,
    /// Coordinates of the character in that basis.
    pub coords: Vec<BigInt>,
    /// SNF of the coordinate column: the cokernel of Z -> lattice.
    pub snf: SnfResult,
    pub verdict: bool,
}

/// Whether `v` is a primitive vector of the saturated lattice spanned by
/// the rows of `lattice`; errors when `v` is not in the lattice at all.
pub fn primitivity_certificate(lattice: &IntMatrix, v: &[BigInt]) -> Result<TorusCertificate> {
    let coords = intmat::solve_in_row_lattice(lattice, v)
        .ok_or_else(|| Error::Inconsistent("character does not lie in the lattice".into()))?;
    let col = IntMatrix::column(&coords);
    let s = snf(&col);
    let nonzero: Vec<&BigInt> = s.invariants.iter().filter(|d| !d.is_zero()).collect();
    let verdict = !nonzero.is_empty() && nonzero.iter().all(|d| d.is_one());
    Ok(TorusCertificate { lattice: lattice.clone(), coords, snf: s, verdict })
}

/// The kernel of chi on G_m^S / G_m^{N+1} is a torus iff chi is primitive in
/// the character lattice.
pub fn kernel_is_torus_check(data: &CharacterData) -> Result<TorusCertificate> {
    if data.chi.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("chi is zero".into()));
    }
    primitivity_certificate(&data.character_lattice(), &data.chi)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuotientCertificate {
    /// chi is trivial on the subtorus.
    pub trivial_on_subtorus: bool,
    /// Character lattice of the quotient torus.
    pub primitivity: TorusCertificate,
    pub verdict: bool,
}

pub fn quotient_by_subtorus_check(data: &CharacterData) -> Result<QuotientCertificate> {
    let rel = &data.subtorus_relations;
    // characters trivial on the subtorus: the saturation of the relation span
    let orth = intmat::saturated_kernel(rel);
    let trivial_on_subtorus = orth.mul_vec(&data.chi)?.iter().all(|x| x.is_zero());
    let et = data.center_embedding.transpose();
    let mut stacked_rows = orth.to_big_rows();
    stacked_rows.extend(et.to_big_rows());
    let stacked = IntMatrix::from_big_rows(&stacked_rows, data.s.len())?;
    let lattice = intmat::saturated_kernel(&stacked);
    let primitivity = primitivity_certificate(&lattice, &data.chi)?;
    let verdict = trivial_on_subtorus && primitivity.verdict;
    Ok(QuotientCertificate { trivial_on_subtorus, primitivity, verdict })
}

impl IntMatrix {
    pub fn to_big_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn from_big_rows(rows: &[Vec<BigInt>], cols: usize) -> Result<IntMatrix> {
        let data = rows.iter().flat_map(|r| r.iter().cloned()).collect();
        IntMatrix::from_vec(rows.len(), cols, data)
    }
}

/// Block-upper-triangular test for the parabolic shape with blocks `r`, `n-r`.
pub fn in_parabolic_shape(m: &FieldMatrix, r: usize) -> bool {
    let n = m.rows();
    let f = m.field();
    (r..n).all(|i| (0..r).all(|j| f.is_zero(m.get(i, j))))
}

#[derive(Clone, Debug)]
pub struct OpenCellPoint {
    pub pi: Vec<FieldMatrix>,
    pub t: Scalar,
}

/// `Pi_i = (lam(pi_i)/lam(delta_i)) g_i g_{i+1}^{-1}`, `t = prod of the ratios`.
/// `lam` is indexed like `data.s`.
pub fn open_cell_point(data: &CharacterData, g: &[FieldMatrix], lam: &[Scalar]) -> Result<OpenCellPoint> {
    let m = data.big_n + 1;
    let n = data.n as usize;
    if g.len() != m || lam.len() != data.s.len() {
        return Err(Error::InvalidInput(format!("expected {m} matrices and {} torus coordinates", data.s.len())));
    }
    let f = g[0].field();
    let mut inv = Vec::with_capacity(m);
    for (i, gi) in g.iter().enumerate() {
        if gi.rows() != n || gi.cols() != n || !in_parabolic_shape(gi, data.r as usize) {
            return Err(Error::ShapeViolation(format!("g_{i} is not in parabolic shape")));
        }
        inv.push(gi.inverse().map_err(|_| Error::Singular(format!("g_{i} is singular")))?);
    }
    let mut t = f.one();
    let mut pi = Vec::with_capacity(m);
    for i in 0..m {
        let kp = data.index_of(&data.pi[i]).expect("pi in S");
        let kd = data.index_of(&data.delta[i]).expect("delta in S");
        let ratio = f
            .div(&lam[kp], &lam[kd])
            .ok_or_else(|| Error::Singular("torus coordinate is zero".into()))?;
        if f.is_zero(&ratio) {
            return Err(Error::Singular("torus coordinate is zero".into()));
        }
        t = f.mul(&t, &ratio);
        pi.push(g[i].mul(&inv[(i + 1) % m])?.scale(&ratio));
    }
    Ok(OpenCellPoint { pi, t })
}

/// Symbolic open cell: a ring holding the parabolic entries of each g_i,
/// torus coordinates for the elements pi_i / delta_i, and inverse
/// auxiliaries, together with the relations defining those inverses.
pub struct SymbolicOpenCell {
    pub ring: Arc<Ring>,
    pub pi: Vec<PolyMatrix>,
    pub t: MultiPoly,
    /// `w_i det g_i - 1`, `u_k lam_k - 1`
    pub relations: PolyIdeal,
}

pub fn symbolic_open_cell(data: &CharacterData, field: Field) -> Result<SymbolicOpenCell> {
    symbolic_open_cell_scaled(data, field, false)
}

/// With `rescale`, every torus coordinate is multiplied by a generic element
/// of the subtorus (one unit per class of the relations lam_pi = lam_delta).
pub fn symbolic_open_cell_scaled(data: &CharacterData, field: Field, rescale: bool) -> Result<SymbolicOpenCell> {
    let n = data.n as usize;
    let r = data.r as usize;
    let m = data.big_n + 1;
    // distinct torus coordinates actually used
    let mut used: Vec<usize> = Vec::new();
    for i in 0..m {
        for e in [&data.pi[i], &data.delta[i]] {
            let k = data.index_of(e).expect("member of S");
            if !used.contains(&k) {
                used.push(k);
            }
        }
    }
    used.sort_unstable();
    // subtorus classes: union of pi_i and delta_i
    let mut class: Vec<usize> = (0..used.len()).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while c[x] != x {
            c[x] = c[c[x]];
            x = c[x];
        }
        x
    }
    for i in 0..m {
        let a = used.binary_search(&data.index_of(&data.pi[i]).unwrap()).unwrap();
        let b = used.binary_search(&data.index_of(&data.delta[i]).unwrap()).unwrap();
        let (ra, rb) = (find(&mut class, a), find(&mut class, b));
        class[ra.max(rb)] = ra.min(rb);
    }
    let roots: Vec<usize> = (0..used.len()).filter(|&k| find(&mut class, k) == k).collect();

    let mut names = Vec::new();
    for i in 0..m {
        for row in 0..n {
            for col in 0..n {
                if !(row >= r && col < r) {
                    names.push(format!("G{i}_{}_{}", row + 1, col + 1));
                }
            }
        }
    }
    for i in 0..m {
        names.push(format!("w{i}"));
    }
    for &k in &used {
        names.push(format!("L{k}"));
        names.push(format!("u{k}"));
    }
    if rescale {
        for &c in &roots {
            names.push(format!("m{c}"));
            names.push(format!("v{c}"));
        }
    }
    let ring = Ring::new(&names, field, MonomialOrder::GrevLex)?;
    let var = |s: String| MultiPoly::var_named(&ring, &s);

    let mut gs = Vec::with_capacity(m);
    let mut rels = Vec::new();
    for i in 0..m {
        let gi = PolyMatrix::from_fn(&ring, n, n, |row, col| {
            if row >= r && col < r {
                MultiPoly::zero(&ring)
            } else {
                var(format!("G{i}_{}_{}", row + 1, col + 1)).expect("declared")
            }
        });
        let det = gi.det()?;
        rels.push(&(&var(format!("w{i}"))? * &det) - &MultiPoly::one(&ring));
        gs.push(gi);
    }
    let mut lam: BTreeMap<usize, (MultiPoly, MultiPoly)> = BTreeMap::new();
    for (pos, &k) in used.iter().enumerate() {
        let (mut l, mut u) = (var(format!("L{k}"))?, var(format!("u{k}"))?);
        rels.push(&(&l * &u) - &MultiPoly::one(&ring));
        if rescale {
            let c = find(&mut class, pos);
            let (mc, vc) = (var(format!("m{c}"))?, var(format!("v{c}"))?);
            l = &l * &mc;
            u = &u * &vc;
        }
        lam.insert(k, (l, u));
    }
    if rescale {
        for &c in &roots {
            rels.push(&(&var(format!("m{c}"))? * &var(format!("v{c}"))?) - &MultiPoly::one(&ring));
        }
    }

    let mut t = MultiPoly::one(&ring);
    let mut pi = Vec::with_capacity(m);
    for i in 0..m {
        let (lp, _) = &lam[&data.index_of(&data.pi[i]).unwrap()];
        let (_, ud) = &lam[&data.index_of(&data.delta[i]).unwrap()];
        let ratio = lp * ud;
        t = &t * &ratio;
        let next = &gs[(i + 1) % m];
        let inv = adjugate(next)?.scale(&var(format!("w{}", (i + 1) % m))?);
        pi.push(gs[i].mul(&inv)?.scale(&ratio));
    }
    let relations = PolyIdeal::new(&ring, rels)?;
    Ok(SymbolicOpenCell { ring, pi, t, relations })
}

/// Classical adjoint: `adj(a) * a = det(a) * Id`.
pub fn adjugate(a: &PolyMatrix) -> Result<PolyMatrix> {
    let n = a.rows();
    let ring = a.ring().clone();
    if n == 1 {
        return Ok(PolyMatrix::identity(&ring, 1));
    }
    let mut out = PolyMatrix::zeros(&ring, n, n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&k| k != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            let mut c = a.submatrix(&rows, &cols).det()?;
            if (i + j) % 2 == 1 {
                c = -&c;
            }
            out.set(i, j, c);
        }
    }
    Ok(out)
}

/// Substitutes the symbolic open cell into every generator of
/// `mu_ideal(n, r, N)` and reduces modulo the inverse relations; returns
/// the residues (all zero when the factorisation holds).
pub fn open_cell_residues(cell: &SymbolicOpenCell, data: &CharacterData) -> Result<Vec<MultiPoly>> {
    let mu = schemes::mu_ideal(data.n as usize, data.r as usize, data.big_n)?;
    let src = mu.ideal.ring().clone();
    let mut images: Vec<Option<MultiPoly>> = vec![None; src.nvars()];
    for (k, name) in src.vars().iter().enumerate() {
        if name == "t" {
            images[k] = Some(cell.t.clone());
        } else if let Some((i, row, col)) = schemes::parse_pi_name(name) {
            images[k] = Some(cell.pi[i].get(row, col).clone());
        }
    }
    mu.ideal
        .gens()
        .iter()
        .map(|g| cell.relations.reduce(&g.substitute(&cell.ring, &images)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: &[(u32, u32)]) -> IndexElem {
        IndexElem::new(p.to_vec())
    }

    #[test]
    fn index_set_sizes() {
        assert_eq!(enumerate_index_set(2, 1, 1).unwrap().len(), 7);
        assert_eq!(enumerate_index_set(3, 1, 1).unwrap().len(), 16);
        assert!(enumerate_index_set(2, 2, 1).is_err());
        assert!(enumerate_index_set(2, 0, 1).is_err());
        let s = enumerate_index_set(3, 2, 2).unwrap();
        assert!(s.contains(&e(&[(3, 0), (0, 0), (0, 0)])));
    }

    #[test]
    fn order_examples() {
        let a = e(&[(0, 2), (1, 0)]);
        let b = e(&[(1, 1), (1, 0)]);
        assert!(leq(&a, &a).unwrap());
        assert!(leq(&a, &b).unwrap());
        assert!(!leq(&e(&[(2, 0), (0, 1)]), &e(&[(0, 1), (2, 0)])).unwrap());
        assert!(leq(&a, &e(&[(1, 1)])).is_err());
    }

    #[test]
    fn pi_delta_wraps() {
        let (p0, d0) = pi_delta(2, 1, 0);
        assert_eq!(p0, e(&[(1, 0), (1, 0)]));
        assert_eq!(d0, e(&[(0, 0), (2, 0)]));
        let (p1, d1) = pi_delta(2, 1, 1);
        assert_eq!(p1, e(&[(1, 0), (1, 0)]));
        assert_eq!(d1, e(&[(2, 0), (0, 0)]));
    }

    #[test]
    fn chi_for_2_1_1() {
        let d = CharacterData::new(2, 1, 1).unwrap();
        let at = |p: &[(u32, u32)]| d.chi[d.index_of(&e(p)).unwrap()].clone();
        assert_eq!(at(&[(1, 0), (1, 0)]), BigInt::from(2));
        assert_eq!(at(&[(0, 0), (2, 0)]), BigInt::from(-1));
        assert_eq!(at(&[(2, 0), (0, 0)]), BigInt::from(-1));
        assert_eq!(d.chi.iter().filter(|c| !c.is_zero()).count(), 3);
        let row = d.index_of(&e(&[(0, 0), (2, 0)])).unwrap();
        assert_eq!(d.center_embedding.row(row), &[BigInt::from(1), BigInt::from(-2)]);
    }

    #[test]
    fn torus_checks_small() {
        let d = CharacterData::new(2, 1, 1).unwrap();
        assert!(kernel_is_torus_check(&d).unwrap().verdict);
        assert!(quotient_by_subtorus_check(&d).unwrap().verdict);
        let doubled: Vec<BigInt> = d.chi.iter().map(|c| c * 2).collect();
        assert!(!primitivity_certificate(&d.character_lattice(), &doubled).unwrap().verdict);
    }
}
