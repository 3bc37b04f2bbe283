//! Right ℍ-linear operators on ℍⁿ as quaternionic matrices.
//!
//! Entries multiply vector components from the left, `(Ax)_i = Σ_j A_ij·x_j`,
//! which is what makes `A(x·q) = (Ax)·q`.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::bridge;
use crate::error::{Result, SpectraError};
use crate::qmodule::QVector;
use crate::quaternion::{Quaternion, SliceFrame};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion<T>>,
}

/// On-disk matrix layout: `{"n": int, "entries": [[[w,x,y,z], ...], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
struct MatrixFile<T> {
    n: usize,
    entries: Vec<Vec<Quaternion<T>>>,
}

impl<T: Real> QMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Quaternion::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Quaternion::one())
    }

    /// `q·I`: left multiplication by `q` in every coordinate.
    pub fn scalar(n: usize, q: Quaternion<T>) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = q;
        }
        m
    }

    pub fn from_diag(d: &[Quaternion<T>]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion<T>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(SpectraError::LengthMismatch {
                left: c,
                right: bad.len(),
            });
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose `k`-th column is `columns[k]`.
    pub fn from_columns(columns: &[QVector<T>]) -> Result<Self> {
        let rows = columns.first().map_or(0, QVector::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(SpectraError::LengthMismatch {
                left: rows,
                right: bad.len(),
            });
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn column(&self, k: usize) -> QVector<T> {
        QVector::new((0..self.rows).map(|i| self[(i, k)]).collect())
    }

    pub fn columns(&self) -> Vec<QVector<T>> {
        (0..self.cols).map(|k| self.column(k)).collect()
    }

    pub fn entries(&self) -> &[Quaternion<T>] {
        &self.data
    }

    pub fn apply(&self, x: &QVector<T>) -> Result<QVector<T>> {
        if x.len() != self.cols {
            return Err(SpectraError::LengthMismatch {
                left: self.cols,
                right: x.len(),
            });
        }
        Ok(QVector::new(
            (0..self.rows)
                .map(|i| {
                    self.data[i * self.cols..(i + 1) * self.cols]
                        .iter()
                        .zip(x.iter())
                        .map(|(a, b)| *a * *b)
                        .sum()
                })
                .collect(),
        ))
    }

    /// `(A*)_ij = conj(A_ji)`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(Quaternion::norm_sqr).sum::<T>().sqrt()
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|q| q.scale(s)).collect(),
        }
    }

    /// `A·diag(d)`: column `k` right-multiplied by `d[k]`.
    pub fn scale_columns(&self, d: &[Quaternion<T>]) -> Self {
        assert_eq!(d.len(), self.cols, "diagonal length mismatch");
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * d[j])
    }

    /// `‖A*A − AA*‖_F`.
    pub fn normality_defect(&self) -> T {
        let a = self.adjoint();
        (&(&a * self) - &(self * &a)).frobenius_norm()
    }

    /// `‖A*A − AA*‖_F ≤ tol·‖A‖_F²`.
    pub fn is_normal(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.frobenius_norm();
        self.normality_defect() <= tol * scale * scale
    }

    /// `‖AB − BA‖_F`.
    pub fn commutator_norm(&self, other: &Self) -> T {
        (&(self * other) - &(other * self)).frobenius_norm()
    }

    /// `Δ_q(A) = A² − A·2re(q) + I·|q|²`.
    pub fn delta(&self, q: &Quaternion<T>) -> Self {
        assert!(self.is_square(), "delta needs a square operator");
        let two_re = T::two() * q.re();
        let mut out = self * self;
        for (o, a) in out.data.iter_mut().zip(&self.data) {
            *o -= a.scale(two_re);
        }
        let n2 = q.norm_sqr();
        for i in 0..self.rows {
            out[(i, i)] += Quaternion::from_real(n2);
        }
        out
    }

    /// Operator norm `sup ‖Ax‖/‖x‖`, via the complex image.
    pub fn op_norm(&self) -> Result<T> {
        bridge::sigma_max(&bridge::chi_dense(self, &SliceFrame::standard()))
    }

    /// Smallest singular value of a square operator.
    pub fn sigma_min(&self) -> T {
        bridge::sigma_min(&bridge::chi_dense(self, &SliceFrame::standard()))
    }

    /// Reads the JSON matrix layout.
    pub fn from_json(s: &str) -> Result<Self>
    where
        T: for<'de> Deserialize<'de>,
    {
        let file: MatrixFile<T> = serde_json::from_str(s)?;
        if file.entries.len() != file.n {
            return Err(SpectraError::Parse(format!(
                "declared n = {} but found {} rows",
                file.n,
                file.entries.len()
            )));
        }
        if let Some(row) = file.entries.iter().find(|r| r.len() != file.n) {
            return Err(SpectraError::Parse(format!(
                "declared n = {} but found a row of length {}",
                file.n,
                row.len()
            )));
        }
        Self::from_rows(file.entries)
    }

    pub fn to_json(&self) -> Result<String>
    where
        T: Serialize,
    {
        if !self.is_square() {
            return Err(SpectraError::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", self.rows, self.cols),
            });
        }
        let file = MatrixFile {
            n: self.rows,
            entries: (0..self.rows)
                .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
                .collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }
}

impl<T> Index<(usize, usize)> for QMatrix<T> {
    type Output = Quaternion<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for QMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &QMatrix<T> {
    type Output = QMatrix<T>;
    fn mul(self, o: Self) -> QMatrix<T> {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                let orow = &o.data[l * o.cols..(l + 1) * o.cols];
                let dst = &mut out.data[i * o.cols..(i + 1) * o.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * *b;
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &QMatrix<T> {
    type Output = QMatrix<T>;
    fn add(self, o: Self) -> QMatrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sum dimension mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &QMatrix<T> {
    type Output = QMatrix<T>;
    fn sub(self, o: Self) -> QMatrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix difference dimension mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<T: Real> Neg for &QMatrix<T> {
    type Output = QMatrix<T>;
    fn neg(self) -> QMatrix<T> {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -*a).collect(),
        }
    }
}
