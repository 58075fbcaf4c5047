//! Dense matrices over a polynomial ring and over the base field.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::field::{Field, Scalar};
use super::poly::{MultiPoly, Ring};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Arc<Ring>,
    rows: usize,
    cols: usize,
    data: Vec<MultiPoly>,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl PolyMatrix {
    pub fn zeros(ring: &Arc<Ring>, rows: usize, cols: usize) -> Self {
        PolyMatrix { ring: ring.clone(), rows, cols, data: vec![MultiPoly::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> Self {
        Self::scalar_identity(ring, n, &MultiPoly::one(ring))
    }

    /// `c * Id`
    pub fn scalar_identity(ring: &Arc<Ring>, n: usize, c: &MultiPoly) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_fn(ring: &Arc<Ring>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> MultiPoly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMatrix { ring: ring.clone(), rows, cols, data }
    }

    /// Matrix of the named variables `{prefix}_{row}_{col}` (1-based).
    pub fn of_variables(ring: &Arc<Ring>, prefix: &str, rows: usize, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(MultiPoly::var_named(ring, &format!("{prefix}_{}_{}", i + 1, j + 1))?);
            }
        }
        Ok(PolyMatrix { ring: ring.clone(), rows, cols, data })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: MultiPoly) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[MultiPoly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = MultiPoly::zero(&self.ring);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    fn zip(&self, other: &PolyMatrix, f: impl Fn(&MultiPoly, &MultiPoly) -> MultiPoly) -> Result<PolyMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidInput("shape mismatch".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(PolyMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &MultiPoly) -> PolyMatrix {
        let data = self.data.iter().map(|a| a * c).collect();
        PolyMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> PolyMatrix {
        let data = self.data.iter().map(|a| -a).collect();
        PolyMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> PolyMatrix {
        let data = self.data.iter().map(f).collect();
        PolyMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.rows != other.rows {
            return Err(Error::InvalidInput("row mismatch in hstack".into()));
        }
        Ok(Self::from_fn(&self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { other.get(i, j - self.cols).clone() }
        }))
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn blocks(a: &PolyMatrix, b: &PolyMatrix, c: &PolyMatrix, d: &PolyMatrix) -> Result<PolyMatrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::InvalidInput("incompatible blocks".into()));
        }
        let (r, k) = (a.rows, a.cols);
        Ok(Self::from_fn(&a.ring, a.rows + c.rows, a.cols + b.cols, |i, j| {
            match (i < r, j < k) {
                (true, true) => a.get(i, j).clone(),
                (true, false) => b.get(i, j - k).clone(),
                (false, true) => c.get(i - r, j).clone(),
                (false, false) => d.get(i - r, j - k).clone(),
            }
        }))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        Self::from_fn(&self.ring, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    /// Determinant by expansion over column subsets (exact, no division).
    pub fn det(&self) -> Result<MultiPoly> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n > 20 {
            return Err(Error::InvalidInput("determinant too large".into()));
        }
        // f[mask] = minor on rows 0..popcount(mask), columns in mask
        let mut layer: HashMap<u32, MultiPoly> = HashMap::new();
        layer.insert(0, MultiPoly::one(&self.ring));
        for i in 0..n {
            let mut next: HashMap<u32, MultiPoly> = HashMap::new();
            for (mask, val) in &layer {
                if val.is_zero() {
                    continue;
                }
                for j in 0..n {
                    if mask & (1 << j) != 0 {
                        continue;
                    }
                    let a = self.get(i, j);
                    if a.is_zero() {
                        continue;
                    }
                    // sign: number of used columns greater than j
                    let above = (mask >> (j + 1)).count_ones();
                    let mut term = val * a;
                    if above % 2 == 1 {
                        term = -&term;
                    }
                    let slot = next.entry(mask | (1 << j)).or_insert_with(|| MultiPoly::zero(&self.ring));
                    *slot = &*slot + &term;
                }
            }
            layer = next;
        }
        Ok(layer.remove(&((1u32 << n) - 1)).unwrap_or_else(|| MultiPoly::zero(&self.ring)))
    }

    /// All k x k minors, row subsets outer and column subsets inner, both
    /// in lexicographic order. `k = 0` gives the single minor 1.
    pub fn minors(&self, k: usize) -> Result<Vec<MultiPoly>> {
        if k > self.rows.min(self.cols) {
            return Ok(Vec::new());
        }
        let rsets = subsets(self.rows, k);
        let csets = subsets(self.cols, k);
        let mut out = Vec::with_capacity(rsets.len() * csets.len());
        for rs in &rsets {
            for cs in &csets {
                out.push(self.submatrix(rs, cs).det()?);
            }
        }
        Ok(out)
    }

    /// Evaluates every entry at a point of the base field.
    pub fn evaluate(&self, point: &[Scalar]) -> FieldMatrix {
        let data = self.data.iter().map(|p| p.evaluate(point)).collect();
        FieldMatrix { field: self.ring.field(), rows: self.rows, cols: self.cols, data }
    }

    pub fn to_ring(&self, target: &Arc<Ring>) -> Result<PolyMatrix> {
        let data = self.data.iter().map(|p| p.to_ring(target)).collect::<Result<_>>()?;
        Ok(PolyMatrix { ring: target.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn from_field_matrix(ring: &Arc<Ring>, m: &FieldMatrix) -> PolyMatrix {
        Self::from_fn(ring, m.rows, m.cols, |i, j| MultiPoly::constant(ring, m.get(i, j).clone()))
    }
}

/// k-element subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Jacobian: rows are polynomials, columns are the given variable indices.
pub fn jacobian(polys: &[MultiPoly], vars: &[usize], ring: &Arc<Ring>) -> PolyMatrix {
    PolyMatrix::from_fn(ring, polys.len(), vars.len(), |i, j| polys[i].derivative(vars[j]))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|s| s.to_string()).collect()).collect();
        write!(f, "{rows:?}")
    }
}

impl FieldMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FieldMatrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FieldMatrix { field, rows, cols, data }
    }

    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(field, rows.len(), cols, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self, idx: &[usize]) -> FieldMatrix {
        Self::from_fn(self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<Scalar>]) -> FieldMatrix {
        Self::from_fn(field, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput("dimension mismatch in product".into()));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> FieldMatrix {
        let f = self.field;
        FieldMatrix { data: self.data.iter().map(|a| f.mul(a, c)).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidInput("shape mismatch".into()));
        }
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Ok(FieldMatrix { data, ..self.clone() })
    }

    pub fn hstack(&self, other: &FieldMatrix) -> FieldMatrix {
        Self::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { other.get(i, j - self.cols).clone() }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.field.is_zero(a))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else { continue };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let q = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&q, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        let f = self.field;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(m.get(i, c))) else { return Ok(f.zero()) };
            if p != c {
                for j in 0..n {
                    m.data.swap(c * n + j, p * n + j);
                }
                det = f.neg(&det);
            }
            let piv = m.get(c, c).clone();
            det = f.mul(&det, &piv);
            let inv = f.inv(&piv).expect("nonzero pivot");
            for i in c + 1..n {
                if f.is_zero(m.get(i, c)) {
                    continue;
                }
                let q = f.mul(m.get(i, c), &inv);
                for j in c..n {
                    let v = f.sub(m.get(i, j), &f.mul(&q, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<FieldMatrix> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(self.field, n));
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::Singular("matrix is not invertible".into()));
        }
        Ok(Self::from_fn(self.field, n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Basis of the null space, as columns.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (row, &pc) in piv.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, fc));
                }
                v
            })
            .collect()
    }

    /// Standard basis vectors that complete the column space to the whole
    /// space (indices, ascending).
    pub fn image_complement(&self) -> Vec<usize> {
        let aug = self.hstack(&Self::identity(self.field, self.rows));
        let (_, piv) = aug.rref();
        piv.into_iter().filter(|&c| c >= self.cols).map(|c| c - self.cols).collect()
    }

    /// Whether the columns of `self` lie in the column span of `other`.
    pub fn span_contained_in(&self, other: &FieldMatrix) -> bool {
        other.hstack(self).rank() == other.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::monomial::MonomialOrder;

    fn ring(vars: &[&str]) -> Arc<Ring> {
        Ring::new(vars, Field::Rational, MonomialOrder::GrevLex).unwrap()
    }

    #[test]
    fn det_2x2_and_3x3() {
        let r = ring(&["a", "b", "c", "d"]);
        let m = PolyMatrix::from_fn(&r, 2, 2, |i, j| MultiPoly::var(&r, 2 * i + j));
        assert_eq!(m.det().unwrap(), r.parse("a*d - b*c").unwrap());

        let m3 = PolyMatrix::from_fn(&r, 3, 3, |i, j| MultiPoly::from_i64(&r, [[2, -1, 0], [1, 3, 2], [0, 1, 4]][i][j]));
        assert_eq!(m3.det().unwrap(), MultiPoly::from_i64(&r, 24));
    }

    #[test]
    fn minors_order_and_edge_cases() {
        let r = ring(&["x", "y"]);
        let m = PolyMatrix::from_fn(&r, 1, 2, |_, j| MultiPoly::var(&r, j));
        let one = m.minors(1).unwrap();
        assert_eq!(one, vec![r.parse("x").unwrap(), r.parse("y").unwrap()]);
        assert_eq!(m.minors(0).unwrap(), vec![MultiPoly::one(&r)]);
        assert!(m.minors(2).unwrap().is_empty());
    }

    #[test]
    fn subsets_lex() {
        assert_eq!(subsets(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn field_inverse_and_kernel() {
        let f = Field::Rational;
        let a = FieldMatrix::from_i64(f, &[vec![2, 1], vec![1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), FieldMatrix::identity(f, 2));
        let s = FieldMatrix::from_i64(f, &[vec![1, 2], vec![2, 4]]);
        assert!(s.inverse().is_err());
        assert_eq!(s.kernel().len(), 1);
        assert_eq!(s.image_complement(), vec![0]);
        let p = Field::prime(5).unwrap();
        assert_eq!(FieldMatrix::from_i64(p, &[vec![1, 2], vec![3, 1]]).det().unwrap(), p.from_i64(-5));
    }
}
