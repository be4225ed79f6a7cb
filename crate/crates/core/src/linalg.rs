//! Dense linear algebra over a [`GaloisField`].

use crate::gf::{Fe, GaloisField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Fe>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn from_row_vecs(cols: usize, rows: &[Vec<Fe>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Matrix { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<Fe>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Fe) {
        self.data[i * self.cols + j] = x;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Fe] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, k: &GaloisField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let (orow, _) = (i * other.cols, ());
            for l in 0..self.cols {
                let a = self.get(i, l);
                if !a.is_zero() {
                    k.axpy(&mut out.data[orow..orow + other.cols], a, other.row(l));
                }
            }
        }
        out
    }

    pub fn add(&self, k: &GaloisField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| k.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, k: &GaloisField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| k.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled(&self, k: &GaloisField, c: Fe) -> Matrix {
        let mut m = self.clone();
        k.scale(&mut m.data, c);
        m
    }

    pub fn pow(&self, k: &GaloisField, e: u32) -> Matrix {
        assert_eq!(self.rows, self.cols);
        (0..e).fold(Matrix::identity(self.rows), |acc, _| acc.mul(k, self))
    }

    /// `self * x` for a column vector `x`.
    pub fn apply(&self, k: &GaloisField, x: &[Fe]) -> Vec<Fe> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Fe::ZERO, |acc, (&a, &b)| k.add(acc, k.mul(a, b)))
            })
            .collect()
    }

    /// Kronecker product, indexing `(i, j) -> i * other.rows + j`.
    pub fn kron(&self, k: &GaloisField, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for r in 0..other.rows {
                    for c in 0..other.cols {
                        out.set(i * other.rows + r, j * other.cols + c, k.mul(a, other.get(r, c)));
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place, restricted to pivots in the first
    /// `limit` columns. Returns the pivot columns.
    pub fn rref_limited(&mut self, k: &GaloisField, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let cols = self.cols;
        let mut r = 0;
        for c in 0..limit.min(cols) {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if piv != r {
                for j in c..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = k.inv(self.get(r, c));
            k.scale(&mut self.data[r * cols + c..(r + 1) * cols], inv);
            let (head, tail) = self.data.split_at_mut(r * cols);
            let (prow, rest) = tail.split_at_mut(cols);
            let prow = &prow[c..];
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let row = if i < r {
                    &mut head[i * cols..(i + 1) * cols]
                } else {
                    &mut rest[(i - r - 1) * cols..(i - r) * cols]
                };
                let f = row[c];
                if !f.is_zero() {
                    k.axpy(&mut row[c..], k.neg(f), prow);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&mut self, k: &GaloisField) -> Vec<usize> {
        let c = self.cols;
        self.rref_limited(k, c)
    }

    pub fn rank(&self, k: &GaloisField) -> usize {
        let mut m = if self.rows > self.cols { self.transpose() } else { self.clone() };
        m.rref(k).len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per non-pivot column, in
    /// increasing order of that column.
    pub fn nullspace(&self, k: &GaloisField) -> Vec<Vec<Fe>> {
        let mut m = self.clone();
        let pivots = m.rref(k);
        nullspace_from_rref(k, &m, &pivots, m.cols)
    }
}

// kernel of the first `n` columns of a matrix already in reduced form there
fn nullspace_from_rref(k: &GaloisField, m: &Matrix, pivots: &[usize], n: usize) -> Vec<Vec<Fe>> {
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Fe::ZERO; n];
            v[f] = Fe::ONE;
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = k.neg(m.get(i, f));
            }
            v
        })
        .collect()
}

/// Kernel basis of the map whose matrix (target rows, source columns) is
/// given, computed in place.
pub fn kernel_in_place(k: &GaloisField, mut m: Matrix) -> (usize, Vec<Vec<Fe>>) {
    let pivots = m.rref(k);
    let ker = nullspace_from_rref(k, &m, &pivots, m.cols);
    (pivots.len(), ker)
}

/// Precomputed solver for `A x = b`.
#[derive(Debug, Clone)]
pub struct Solver {
    m: usize,
    n: usize,
    pivots: Vec<usize>,
    // rows of the transform P with P A in reduced echelon form
    transform: Matrix,
}

impl Solver {
    pub fn new(k: &GaloisField, a: &Matrix) -> Self {
        Self::with_kernel(k, a).0
    }

    /// The solver together with a kernel basis of `a`, from one elimination.
    pub fn with_kernel(k: &GaloisField, a: &Matrix) -> (Self, Vec<Vec<Fe>>) {
        let (m, n) = (a.rows(), a.cols());
        let mut aug = Matrix::zeros(m, n + m);
        for i in 0..m {
            aug.row_mut(i)[..n].copy_from_slice(a.row(i));
            aug.set(i, n + i, Fe::ONE);
        }
        let pivots = aug.rref_limited(k, n);
        let kernel = nullspace_from_rref(k, &aug, &pivots, n);
        let mut transform = Matrix::zeros(m, m);
        for i in 0..m {
            transform.row_mut(i).copy_from_slice(&aug.row(i)[n..]);
        }
        (Solver { m, n, pivots, transform }, kernel)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn source_dim(&self) -> usize {
        self.n
    }

    pub fn target_dim(&self) -> usize {
        self.m
    }

    /// Some `x` with `A x = b`, or `None` if `b` is not in the image.
    pub fn solve(&self, k: &GaloisField, b: &[Fe]) -> Option<Vec<Fe>> {
        assert_eq!(b.len(), self.m);
        let mut c = vec![Fe::ZERO; self.m];
        for (j, &bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            for (i, ci) in c.iter_mut().enumerate() {
                let t = self.transform.get(i, j);
                if !t.is_zero() {
                    *ci = k.add(*ci, k.mul(t, bj));
                }
            }
        }
        if c[self.pivots.len()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut x = vec![Fe::ZERO; self.n];
        for (i, &col) in self.pivots.iter().enumerate() {
            x[col] = c[i];
        }
        Some(x)
    }
}

/// A subspace held in reduced echelon form, grown one vector at a time.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after reduction by the current rows.
    pub fn reduce(&self, k: &GaloisField, v: &[Fe]) -> Vec<Fe> {
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c];
            if !f.is_zero() {
                k.axpy(&mut v, k.neg(f), row);
            }
        }
        v
    }

    pub fn contains(&self, k: &GaloisField, v: &[Fe]) -> bool {
        self.reduce(k, v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, k: &GaloisField, v: &[Fe]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut r = self.reduce(k, v);
        let Some(c) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = k.inv(r[c]);
        k.scale(&mut r, inv);
        for row in self.rows.iter_mut() {
            let f = row[c];
            if !f.is_zero() {
                k.axpy(row, k.neg(f), &r);
            }
        }
        let pos = self.pivots.partition_point(|&p| p < c);
        self.pivots.insert(pos, c);
        self.rows.insert(pos, r);
        true
    }
}

/// Rank of a list of vectors.
pub fn rank_of(k: &GaloisField, dim: usize, vectors: &[Vec<Fe>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_row_vecs(dim, vectors).rank(k)
}

/// Row echelon basis of sparse vectors, indexed by leading column. Rows are
/// reduced only at their leading entries, which keeps fill-in low for the
/// very sparse boundary maps of tensor complexes.
#[derive(Debug, Clone)]
pub struct SparseEchelon {
    rows: Vec<Option<Vec<(u32, Fe)>>>,
    rank: usize,
}

impl SparseEchelon {
    pub fn new(dim: usize) -> Self {
        SparseEchelon { rows: vec![None; dim], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Adds `v` (sorted by column, no zero entries); returns false if it was
    /// already in the span.
    pub fn insert(&mut self, k: &GaloisField, mut v: Vec<(u32, Fe)>) -> bool {
        let mut scratch = Vec::new();
        loop {
            let Some(&(lead, x)) = v.first() else { return false };
            match &self.rows[lead as usize] {
                Some(row) => {
                    sparse_axpy(k, &v, k.neg(x), row, &mut scratch);
                    std::mem::swap(&mut v, &mut scratch);
                }
                None => {
                    let inv = k.inv(x);
                    for e in v.iter_mut() {
                        e.1 = k.mul(e.1, inv);
                    }
                    self.rows[lead as usize] = Some(v);
                    self.rank += 1;
                    return true;
                }
            }
        }
    }
}

// out = a + c * b for sorted sparse vectors
fn sparse_axpy(k: &GaloisField, a: &[(u32, Fe)], c: Fe, b: &[(u32, Fe)], out: &mut Vec<(u32, Fe)>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        let (col, val) = if take_a {
            i += 1;
            a[i - 1]
        } else if take_b {
            j += 1;
            (b[j - 1].0, k.mul(c, b[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (a[i - 1].0, k.add(a[i - 1].1, k.mul(c, b[j - 1].1)))
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
}
