//! Arbitrary-precision integer matrices: Smith and Hermite normal forms,
//! saturated kernels and cokernel invariants.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows_i64())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Rows of small integers; all rows must have length `cols`.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::InvalidInput("ragged rows".into()));
            }
            data.extend(r.iter().map(|&v| BigInt::from(v)));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn column(v: &[BigInt]) -> Self {
        IntMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows_i64(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| i64::try_from(v).unwrap_or(i64::MAX)).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput("dimension mismatch in product".into()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        Ok(self.mul(&IntMatrix::column(v))?.data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }

    pub fn rank(&self) -> usize {
        snf(self).invariants.iter().filter(|d| !d.is_zero()).count()
    }
}

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal with
/// `d_1 | d_2 | ...` and trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `d`: the nonzero invariant factors followed by zeros.
    pub invariants: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariants.iter().filter(|d| !d.is_zero()).count()
    }

    /// Re-checks every claimed property exactly.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let Ok(uav) = self.u.mul(a).and_then(|ua| ua.mul(&self.v)) else {
            return false;
        };
        if uav != self.d {
            return false;
        }
        let unit = |m: &IntMatrix| m.det().map(|d| d.abs().is_one()).unwrap_or(false);
        if !unit(&self.u) || !unit(&self.v) {
            return false;
        }
        for i in 0..self.d.rows {
            for j in 0..self.d.cols {
                if i != j && !self.d.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        let inv = &self.invariants;
        for w in inv.windows(2) {
            if w[0].is_zero() && !w[1].is_zero() {
                return false;
            }
            if !w[0].is_zero() && !w[1].is_multiple_of(&w[0]) {
                return false;
            }
        }
        inv.iter().all(|d| !d.is_negative())
    }
}

pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let steps = m.min(n);
    for t in 0..steps {
        // pivot: smallest nonzero magnitude in the trailing block
        let mut piv: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if piv.is_none_or(|(pi, pj)| x.abs() < d.get(pi, pj).abs()) {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(d.get(t, t));
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d.get(i, t).is_zero() {
                    // remainder is smaller than the pivot: promote it
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(d.get(t, t));
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d.get(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let p = d.get(t, t).clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    let invariants = (0..steps).map(|i| d.get(i, i).clone()).collect();
    SnfResult { u, d, v, invariants }
}

/// Cokernel of `a : Z^cols -> Z^rows`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cokernel {
    /// Nonzero invariant factors (1's included).
    pub invariants: Vec<BigInt>,
    pub free_rank: usize,
}

impl Cokernel {
    pub fn is_torsion_free(&self) -> bool {
        self.invariants.iter().all(|d| d.is_one())
    }

    /// Invariants followed by one zero per free summand.
    pub fn with_zeros(&self) -> Vec<BigInt> {
        let mut v = self.invariants.clone();
        v.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank));
        v
    }
}

pub fn cokernel_invariants(a: &IntMatrix) -> Cokernel {
    let s = snf(a);
    let invariants: Vec<BigInt> = s.invariants.iter().filter(|d| !d.is_zero()).cloned().collect();
    let free_rank = a.rows - invariants.len();
    Cokernel { invariants, free_rank }
}

/// Row-style Hermite normal form: echelon rows with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (m, n) = (h.rows, h.cols);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let piv = (r..m).filter(|&i| !h.get(i, c).is_zero()).min_by_key(|&i| h.get(i, c).abs());
            let Some(p) = piv else { break };
            h.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -h.get(i, c).div_floor(h.get(r, c));
                h.add_row(i, r, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m && !h.get(r, c).is_zero() {
            if h.get(r, c).is_negative() {
                h.negate_row(r);
            }
            for i in 0..r {
                let q = -h.get(i, c).div_floor(h.get(r, c));
                h.add_row(i, r, &q);
            }
            r += 1;
        }
    }
    let data = h.data[..r * n].to_vec();
    IntMatrix { rows: r, cols: n, data }
}

/// Basis (as rows, in Hermite form) of `{x : a x = 0}`; the spanned lattice
/// is saturated.
pub fn saturated_kernel(a: &IntMatrix) -> IntMatrix {
    let s = snf(a);
    let rank = s.rank();
    let n = a.cols;
    let mut rows = IntMatrix::zeros(n - rank, n);
    for (k, j) in (rank..n).enumerate() {
        for i in 0..n {
            rows.set(k, i, s.v.get(i, j).clone());
        }
    }
    hermite_rows(&rows)
}

/// Integer solution `c` of `basis^T c = target` (target in the row span of
/// `basis`), or `None` when the target is not an integral combination.
pub fn solve_in_row_lattice(basis: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    // basis^T (cols x k) * c = target
    let bt = basis.transpose();
    let s = snf(&bt);
    let ut = s.u.mul_vec(target).ok()?;
    let k = basis.rows;
    let mut y = vec![BigInt::zero(); k];
    for i in 0..bt.rows {
        let d = if i < s.invariants.len() { s.invariants[i].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !ut[i].is_zero() {
                return None;
            }
            continue;
        }
        if !ut[i].is_multiple_of(&d) {
            return None;
        }
        y[i] = &ut[i] / &d;
    }
    s.v.mul_vec(&y).ok()
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
        IntMatrix::from_rows(rows, cols).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_identity() {
        let s = snf(&IntMatrix::identity(2));
        assert_eq!(s.invariants, ints(&[1, 1]));
        assert_eq!(s.d, IntMatrix::identity(2));
    }

    #[test]
    fn snf_diag_2_3() {
        let a = m(&[vec![2, 0], vec![0, 3]], 2);
        let s = snf(&a);
        assert_eq!(s.invariants, ints(&[1, 6]));
        assert!(s.verify(&a));
    }

    #[test]
    fn snf_zero() {
        let a = IntMatrix::zeros(1, 1);
        let s = snf(&a);
        assert_eq!(s.invariants, ints(&[0]));
        assert!(s.verify(&a));
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel_invariants(&m(&[vec![2], vec![-1], vec![-1]], 1));
        assert_eq!(c.invariants, ints(&[1]));
        assert_eq!(c.free_rank, 2);
        assert!(c.is_torsion_free());

        let c = cokernel_invariants(&m(&[vec![2], vec![4]], 1));
        assert_eq!(c.invariants, ints(&[2]));
        assert!(!c.is_torsion_free());

        let c = cokernel_invariants(&IntMatrix::zeros(3, 0));
        assert!(c.invariants.is_empty());
        assert_eq!(c.free_rank, 3);
        assert_eq!(c.with_zeros(), ints(&[0, 0, 0]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(saturated_kernel(&m(&[vec![1, 1]], 2)).to_rows_i64(), vec![vec![1, -1]]);
        assert_eq!(saturated_kernel(&IntMatrix::identity(3)).rows(), 0);
        assert_eq!(saturated_kernel(&m(&[vec![2, 4]], 2)).to_rows_i64(), vec![vec![2, -1]]);
    }

    #[test]
    fn hermite_form() {
        let h = hermite_rows(&m(&[vec![2, 4, 6], vec![1, 1, 1], vec![3, 5, 7]], 3));
        assert_eq!(h.to_rows_i64(), vec![vec![1, 1, 1], vec![0, 2, 4]]);
    }

    #[test]
    fn determinant() {
        let a = m(&[vec![2, -1, 0], vec![1, 3, 2], vec![0, 1, 4]], 3);
        assert_eq!(a.det().unwrap(), BigInt::from(24));
        assert_eq!(m(&[vec![0, 1], vec![1, 0]], 2).det().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn lattice_solve() {
        let basis = m(&[vec![1, 0, -1], vec![0, 1, -1]], 3);
        let c = solve_in_row_lattice(&basis, &ints(&[2, -5, 3])).unwrap();
        assert_eq!(c, ints(&[2, -5]));
        assert!(solve_in_row_lattice(&basis, &ints(&[1, 1, 1])).is_none());
        let doubled = m(&[vec![2, 0]], 2);
        assert!(solve_in_row_lattice(&doubled, &ints(&[1, 0])).is_none());
    }
}
