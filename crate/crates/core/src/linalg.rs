//! Dense matrices and vectors over the rationals.
//!
//! Everything here is exact. Elimination is plain Gauss–Jordan; the sizes this
//! crate deals with (a few dozen rows at most) do not call for fraction-free
//! variants.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Signed, Zero};

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::poly::QPoly;
use crate::rational::{fmt_q, hash_slice, mat_serde, q, q_eq, slice_eq, to_f64, Q};

pub type QVec = Vec<Q>;

#[derive(Clone)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(fmt_q).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl PartialEq for QMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && slice_eq(&self.data, &other.data)
    }
}

impl Eq for QMatrix {}

impl std::hash::Hash for QMatrix {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.rows.hash(h);
        hash_slice(&self.data, h);
    }
}

/// Rows of rational strings. An empty list is the 0x0 matrix.
impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        mat_serde::serialize(&self.to_rows(), s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = mat_serde::deserialize(d)?;
        if rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(de::Error::custom("matrix rows have different lengths"));
        }
        Ok(QMatrix::from_rows(rows))
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn from_columns(cols: &[QVec], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..nrows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[Q]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> QVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(to_f64).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> QVec {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn neg(&self) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).fold(Q::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> QMatrix {
        let mut b = Self::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                b[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        b
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &QMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    /// `[[a, 0], [c, d]]` style assembly from four blocks.
    pub fn from_blocks(a: &QMatrix, b: &QMatrix, c: &QMatrix, d: &QMatrix) -> QMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut m = Self::zeros(a.rows + c.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m.set_block(a.rows, 0, c);
        m.set_block(a.rows, a.cols, d);
        m
    }

    pub fn hstack(a: &QMatrix, b: &QMatrix) -> QMatrix {
        assert_eq!(a.rows, b.rows);
        let mut m = Self::zeros(a.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m
    }

    /// Vertical stack of matrices with equal column counts.
    pub fn vstack(parts: &[QMatrix]) -> QMatrix {
        let cols = parts.first().map_or(0, |m| m.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            rows += p.rows;
            data.extend(p.data.iter().cloned());
        }
        QMatrix { rows, cols, data }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = Q::one() / &m[(r, c)];
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
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

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<QVec> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.cols];
                x[f] = Q::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = -r[(row, f)].clone();
                }
                x
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = QMatrix::hstack(self, &QMatrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn det(&self) -> Q {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &pivot;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }

    /// `det(x I - self)` via Faddeev–LeVerrier.
    pub fn charpoly(&self) -> QPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let mut m = QMatrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            m = next;
            let t = self.mul(&m).trace();
            coeffs[n - k] = -t / q(k as i64);
        }
        QPoly::new(coeffs)
    }

    pub fn pow(&self, e: usize) -> QMatrix {
        let mut acc = QMatrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// True when every leading principal minor is strictly positive.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_square() || *self != self.transpose() {
            return false;
        }
        (1..=self.rows).all(|k| self.block(0, 0, k, k).det().is_positive())
    }

    pub fn conjugate_by(&self, c: &QMatrix, c_inv: &QMatrix) -> QMatrix {
        c.mul(self).mul(c_inv)
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data.iter().map(|x| to_f64(x).abs()).fold(0.0, f64::max)
    }
}

pub fn vec_is_zero(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn vec_add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Q], s: &Q) -> QVec {
    a.iter().map(|x| x * s).collect()
}

pub fn vec_neg(a: &[Q]) -> QVec {
    a.iter().map(|x| -x).collect()
}

pub fn unit(n: usize, i: usize) -> QVec {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

/// If `b` is a scalar multiple of the nonzero vector `a`, the scalar.
pub fn proportionality(a: &[Q], b: &[Q]) -> Option<Q> {
    let i = a.iter().position(|x| !x.is_zero())?;
    let s = &b[i] / &a[i];
    a.iter().zip(b).all(|(x, y)| q_eq(&(x * &s), y)).then_some(s)
}

/// Rank of the span of a list of equal-length vectors.
pub fn span_rank(vs: &[QVec]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    QMatrix::from_rows(vs.to_vec()).rank()
}

/// Row-reduced basis of the span of `vs`.
pub fn span_basis(vs: &[QVec]) -> Vec<QVec> {
    if vs.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = QMatrix::from_rows(vs.to_vec()).rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Basis of the intersection of two subspaces given by spanning sets.
pub fn intersect(a: &[QVec], b: &[QVec], dim: usize) -> Vec<QVec> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // x = A s = B t  <=>  [A | -B] (s, t) = 0
    let mut cols: Vec<QVec> = a.to_vec();
    cols.extend(b.iter().map(|v| vec_neg(v)));
    let m = QMatrix::from_columns(&cols, dim);
    let sols = m.nullspace();
    let am = QMatrix::from_columns(a, dim);
    let out: Vec<QVec> = sols.iter().map(|s| am.mul_vec(&s[..a.len()])).collect();
    span_basis(&out)
}

pub fn vec_abs_max(v: &[Q]) -> Q {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
}
