//! Vectors of the right ℍ-module ℍⁿ and orthonormal bases.
//!
//! Scalars always act from the right: `x·q` scales every entry as `x_i·q`,
//! and a basis expansion reads `x = Σ z·⟨z|x⟩`.

use std::ops::{Add, Index, IndexMut, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectraError};
use crate::quaternion::Quaternion;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct QVector<T> {
    entries: Vec<Quaternion<T>>,
}

impl<T: Real> QVector<T> {
    pub fn new(entries: Vec<Quaternion<T>>) -> Self {
        Self { entries }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![Quaternion::zero(); n])
    }

    /// The `k`-th standard basis vector of ℍⁿ.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.entries[k] = Quaternion::one();
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Quaternion<T>] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Quaternion<T>] {
        &mut self.entries
    }

    pub fn into_entries(self) -> Vec<Quaternion<T>> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Quaternion<T>> {
        self.entries.iter()
    }

    /// `⟨self|other⟩ = Σ conj(self_i)·other_i`, right-linear in `other`.
    pub fn inner(&self, other: &Self) -> Result<Quaternion<T>> {
        if self.len() != other.len() {
            return Err(SpectraError::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self.inner_unchecked(other))
    }

    #[inline]
    pub(crate) fn inner_unchecked(&self, other: &Self) -> Quaternion<T> {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * *b)
            .sum()
    }

    pub fn norm_sqr(&self) -> T {
        self.entries.iter().map(Quaternion::norm_sqr).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Entrywise `x_i·q`.
    pub fn scale_right(&self, q: Quaternion<T>) -> Self {
        Self::new(self.entries.iter().map(|e| *e * q).collect())
    }

    /// Entrywise `q·x_i`. Not a module operation; used for `J = m·I` style maps.
    pub fn scale_left(&self, q: Quaternion<T>) -> Self {
        Self::new(self.entries.iter().map(|e| q * *e).collect())
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self::new(self.entries.iter().map(|e| e.scale(s)).collect())
    }

    /// `self += z·c`.
    pub(crate) fn add_scaled(&mut self, z: &Self, c: Quaternion<T>) {
        for (a, b) in self.entries.iter_mut().zip(&z.entries) {
            *a += *b * c;
        }
    }

    /// `self -= z·c`.
    pub(crate) fn sub_scaled(&mut self, z: &Self, c: Quaternion<T>) {
        for (a, b) in self.entries.iter_mut().zip(&z.entries) {
            *a -= *b * c;
        }
    }

    pub fn dist(&self, other: &Self) -> T {
        (self - other).norm()
    }
}

impl<T> Index<usize> for QVector<T> {
    type Output = Quaternion<T>;
    fn index(&self, i: usize) -> &Quaternion<T> {
        &self.entries[i]
    }
}

impl<T> IndexMut<usize> for QVector<T> {
    fn index_mut(&mut self, i: usize) -> &mut Quaternion<T> {
        &mut self.entries[i]
    }
}

impl<T: Real> Add for &QVector<T> {
    type Output = QVector<T>;
    fn add(self, o: Self) -> QVector<T> {
        assert_eq!(self.len(), o.len(), "vector length mismatch");
        QVector::new(self.iter().zip(o.iter()).map(|(a, b)| *a + *b).collect())
    }
}

impl<T: Real> Sub for &QVector<T> {
    type Output = QVector<T>;
    fn sub(self, o: Self) -> QVector<T> {
        assert_eq!(self.len(), o.len(), "vector length mismatch");
        QVector::new(self.iter().zip(o.iter()).map(|(a, b)| *a - *b).collect())
    }
}

impl<T: Real> Neg for &QVector<T> {
    type Output = QVector<T>;
    fn neg(self) -> QVector<T> {
        QVector::new(self.iter().map(|a| -*a).collect())
    }
}

/// An orthonormal family in ℍⁿ, complete when it has `n` members.
#[derive(Clone, Debug, PartialEq)]
pub struct HilbertBasis<T> {
    vectors: Vec<QVector<T>>,
    dim: usize,
}

impl<T: Real> HilbertBasis<T> {
    /// Standard basis `e_1, …, e_n`.
    pub fn standard(n: usize) -> Self {
        Self {
            vectors: (0..n).map(|k| QVector::unit(n, k)).collect(),
            dim: n,
        }
    }

    /// Accepts a family already known to be orthonormal to `tol`.
    pub fn from_orthonormal(vectors: Vec<QVector<T>>, tol: T) -> Result<Self> {
        let dim = vectors.first().map_or(0, QVector::len);
        if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
            return Err(SpectraError::LengthMismatch {
                left: dim,
                right: bad.len(),
            });
        }
        let basis = Self { vectors, dim };
        let err = basis.orthonormality_error();
        if !(err <= tol) {
            return Err(SpectraError::RankDeficient {
                index: 0,
                residual: err.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(basis)
    }

    pub fn vectors(&self) -> &[QVector<T>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<QVector<T>> {
        self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Length of each member vector.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_complete(&self) -> bool {
        self.vectors.len() == self.dim
    }

    /// `max |⟨z|z'⟩ − δ_{z,z'}|` over all pairs.
    pub fn orthonormality_error(&self) -> T {
        let mut worst = T::zero();
        for (a, za) in self.vectors.iter().enumerate() {
            for (b, zb) in self.vectors.iter().enumerate().skip(a) {
                let g = za.inner_unchecked(zb);
                let e = if a == b {
                    g.dist(&Quaternion::one())
                } else {
                    g.norm()
                };
                worst = worst.max(e);
            }
        }
        worst
    }

    /// Coefficients `c_z = ⟨z|x⟩`.
    pub fn expand(&self, x: &QVector<T>) -> Result<Vec<Quaternion<T>>> {
        if !self.is_complete() {
            return Err(SpectraError::IncompleteBasis {
                size: self.vectors.len(),
                dim: self.dim,
            });
        }
        self.vectors.iter().map(|z| z.inner(x)).collect()
    }

    /// `Σ z·c_z`.
    pub fn reconstruct(&self, coeffs: &[Quaternion<T>]) -> Result<QVector<T>> {
        if coeffs.len() != self.vectors.len() {
            return Err(SpectraError::LengthMismatch {
                left: self.vectors.len(),
                right: coeffs.len(),
            });
        }
        let mut x = QVector::zeros(self.dim);
        for (z, c) in self.vectors.iter().zip(coeffs) {
            x.add_scaled(z, *c);
        }
        Ok(x)
    }
}

/// Modified Gram–Schmidt with one re-orthogonalization pass, in input order.
///
/// Projections subtract `z·⟨z|v⟩`, coefficient on the right.
pub fn gram_schmidt<T: Real>(vs: &[QVector<T>]) -> Result<HilbertBasis<T>> {
    let dim = vs.first().map_or(0, QVector::len);
    let mut out: Vec<QVector<T>> = Vec::with_capacity(vs.len());
    for (index, v) in vs.iter().enumerate() {
        if v.len() != dim {
            return Err(SpectraError::LengthMismatch {
                left: dim,
                right: v.len(),
            });
        }
        let mut w = v.clone();
        for _pass in 0..2 {
            for z in &out {
                let c = z.inner_unchecked(&w);
                w.sub_scaled(z, c);
            }
        }
        let r = w.norm();
        if !(r >= T::rank_tol()) {
            return Err(SpectraError::RankDeficient {
                index,
                residual: r.to_f64().unwrap_or(f64::NAN),
            });
        }
        out.push(w.scale_real(r.recip()));
    }
    Ok(HilbertBasis { vectors: out, dim })
}
