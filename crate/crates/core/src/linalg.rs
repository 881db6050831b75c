//! Exact linear algebra over F_p.
//!
//! Two layers: a small dense [`ScalarMatrix`] with the textbook operations,
//! and an incremental sparse [`Echelon`] that the truncation engines use for
//! spans, normal forms and kernels of maps with a few thousand columns.

use std::fmt;

use crate::error::{Error, Result};
use crate::field;

/// Sorted `(column, nonzero value)` pairs.
pub type SparseVec = Vec<(u32, u32)>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    p: u32,
    data: Vec<u32>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize, p: u32) -> Self {
        Self {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_raw(rows: usize, cols: usize, p: u32, data: Vec<u32>) -> Self {
        assert_eq!(rows * cols, data.len(), "entry grid does not match dimensions");
        Self { rows, cols, p, data }
    }

    pub fn from_rows_i64(rows: &[Vec<i64>], p: u32) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Shape("ragged rows".into()));
            }
            data.extend(row.iter().map(|&v| field::reduce_i64(v, p)));
        }
        Ok(Self::from_raw(r, c, p, data))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn mul(&self, rhs: &ScalarMatrix) -> Result<ScalarMatrix> {
        if self.cols != rhs.rows || self.p != rhs.p {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let p = self.p;
        let mut out = Self::zeros(self.rows, rhs.cols, p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = field::add(out.data[idx], field::mul(a, rhs.get(k, j), p), p);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::Shape("vector length".into()));
        }
        let p = self.p;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| field::add(acc, field::mul(a, b, p), p))
            })
            .collect())
    }

    pub fn add(&self, rhs: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let p = self.p;
        Self::from_raw(
            self.rows,
            self.cols,
            p,
            self.data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| field::add(a, b, p))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let p = self.p;
        Self::from_raw(
            self.rows,
            self.cols,
            p,
            self.data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| field::sub(a, b, p))
                .collect(),
        )
    }

    pub fn scale(&self, c: u32) -> ScalarMatrix {
        let p = self.p;
        Self::from_raw(
            self.rows,
            self.cols,
            p,
            self.data.iter().map(|&a| field::mul(a, c, p)).collect(),
        )
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (ScalarMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = field::inv(m.get(r, c), p);
            for j in 0..m.cols {
                let v = field::mul(m.get(r, j), inv, p);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = field::sub(m.get(i, j), field::mul(factor, m.get(r, j), p), p);
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

    /// Basis of `{v : A v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = field::neg(r.get(row, free), p);
            }
            out.push(v);
        }
        out
    }

    /// Some `x` with `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::Shape(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols);
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<ScalarMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n, self.p);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zeros(n, n, self.p);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j));
            }
        }
        Some(out)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (mod {})", self.to_rows(), self.p)
    }
}

pub fn sparse_from_dense(v: &[u32]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| (i as u32, x))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec, n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    for &(i, x) in v {
        out[i as usize] = x;
    }
    out
}

/// `a + c * b` for sparse vectors.
pub fn sparse_axpy(a: &SparseVec, c: u32, b: &SparseVec, p: u32) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let v = field::mul(c, b[j].1, p);
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = field::add(a[i].1, field::mul(c, b[j].1, p), p);
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_scale(a: &SparseVec, c: u32, p: u32) -> SparseVec {
    if c == 0 {
        return Vec::new();
    }
    a.iter().map(|&(i, v)| (i, field::mul(v, c, p))).collect()
}

/// Incrementally maintained row echelon basis of a subspace of `F_p^ncols`.
///
/// Pivot rows are normalized to a leading one. Column order is the
/// elimination order: lower columns become pivots first, so callers place
/// the coordinates they want eliminated first at low indices.
#[derive(Clone)]
pub struct Echelon {
    ncols: usize,
    p: u32,
    pivot_of: Vec<u32>,
    rows: Vec<SparseVec>,
}

const NO_PIVOT: u32 = u32::MAX;

impl Echelon {
    pub fn new(ncols: usize, p: u32) -> Self {
        Self {
            ncols,
            p,
            pivot_of: vec![NO_PIVOT; ncols],
            rows: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of[col] != NO_PIVOT
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Fully reduces `v` against the pivots; the result vanishes on every
    /// pivot column and is independent of insertion order.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc = vec![0u32; self.ncols];
        self.reduce_dense(v, &mut acc)
    }

    /// As [`Echelon::reduce`] with a caller-provided zeroed scratch buffer of
    /// length `ncols`; the buffer is left zeroed.
    pub fn reduce_with(&self, v: &SparseVec, acc: &mut [u32]) -> SparseVec {
        self.reduce_dense(v, acc)
    }

    fn reduce_dense(&self, v: &SparseVec, acc: &mut [u32]) -> SparseVec {
        let p = self.p;
        let Some(&(lo, _)) = v.first() else {
            return Vec::new();
        };
        for &(i, x) in v {
            acc[i as usize] = x;
        }
        let mut out = Vec::new();
        for c in lo as usize..self.ncols {
            let x = acc[c];
            if x == 0 {
                continue;
            }
            acc[c] = 0;
            let r = self.pivot_of[c];
            if r == NO_PIVOT {
                out.push((c as u32, x));
                continue;
            }
            let factor = field::neg(x, p);
            for &(j, y) in &self.rows[r as usize][1..] {
                let j = j as usize;
                acc[j] = field::add(acc[j], field::mul(factor, y, p), p);
            }
        }
        out
    }

    /// Adds `v` to the span. Returns the new pivot column, if any.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let r = self.reduce(v);
        self.push_reduced(r)
    }

    /// Adds a vector already in normal form with respect to `self`.
    pub fn push_reduced(&mut self, mut r: SparseVec) -> Option<usize> {
        let &(lead, lc) = r.first()?;
        let inv = field::inv(lc, self.p);
        if inv != 1 {
            for e in r.iter_mut() {
                e.1 = field::mul(e.1, inv, self.p);
            }
        }
        self.pivot_of[lead as usize] = self.rows.len() as u32;
        self.rows.push(r);
        Some(lead as usize)
    }

    pub fn insert_all<'a>(&mut self, vs: impl IntoIterator<Item = &'a SparseVec>) -> usize {
        let mut acc = vec![0u32; self.ncols];
        let mut added = 0;
        for v in vs {
            let r = self.reduce_dense(v, &mut acc);
            if self.push_reduced(r).is_some() {
                added += 1;
            }
        }
        added
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Columns that are not pivots.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| !self.is_pivot(c)).collect()
    }
}

/// Kernel of the linear map sending basis vector `j` to `images[j]`, where
/// images live in a space of dimension `target_dim`.
pub fn kernel(images: &[SparseVec], target_dim: usize, p: u32) -> Vec<SparseVec> {
    let n = images.len();
    let mut ech = Echelon::new(target_dim + n, p);
    let mut acc = vec![0u32; target_dim + n];
    for (j, img) in images.iter().enumerate() {
        let mut v = img.clone();
        v.push(((target_dim + j) as u32, 1));
        let r = ech.reduce_dense(&v, &mut acc);
        ech.push_reduced(r);
    }
    ech.rows
        .into_iter()
        .filter(|r| r[0].0 as usize >= target_dim)
        .map(|r| r.into_iter().map(|(i, x)| (i - target_dim as u32, x)).collect())
        .collect()
}

/// Dimension of the span of a family of sparse vectors.
pub fn span_rank(vs: &[SparseVec], ncols: usize, p: u32) -> usize {
    let mut ech = Echelon::new(ncols, p);
    ech.insert_all(vs.iter())
}

/// `dim(span(num ∪ den)) - dim(span(den))`.
pub fn quotient_dim(num: &[SparseVec], den: &[SparseVec], ncols: usize, p: u32) -> usize {
    let mut ech = Echelon::new(ncols, p);
    ech.insert_all(den.iter());
    ech.insert_all(num.iter())
}
