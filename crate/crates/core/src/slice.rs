//! Slice complex structures: an anti-self-adjoint unitary `J`, the slice
//! subspaces `H₊ = {x : Jx = x·m}` and `H₋ = H₊·n`, and the passage between
//! `C_m`-linear operators on `H₊` and right ℍ-linear operators on ℍⁿ.

use crate::bridge::{CMatrix, SpectralDecomposition};
use crate::error::{Result, SpectraError};
use crate::qmodule::{HilbertBasis, QVector};
use crate::qoperator::QMatrix;
use crate::quaternion::{Quaternion, SliceFrame};
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct SliceStructure<T> {
    pub j: QMatrix<T>,
    pub frame: SliceFrame<T>,
    /// Right-`C_m` orthonormal basis of `H₊`; also a Hilbert basis of ℍⁿ.
    pub plus_basis: HilbertBasis<T>,
    basis_matrix: QMatrix<T>,
}

impl<T: Real> SliceStructure<T> {
    /// `J = V·(m·I)·V*` for a unitary `V`; its columns span `H₊`.
    pub fn from_unitary(v: &QMatrix<T>, frame: &SliceFrame<T>) -> Result<Self> {
        if !v.is_square() {
            return Err(SpectraError::DimensionMismatch {
                expected: "square unitary".into(),
                found: format!("{}x{}", v.rows(), v.cols()),
            });
        }
        let n = v.n();
        let j = &v.scale_columns(&vec![frame.m(); n]) * &v.adjoint();
        let tol = T::check_tol() * T::lit(100.0) * T::from_usize(n.max(1)).unwrap();
        let plus_basis = HilbertBasis::from_orthonormal(v.columns(), tol)?;
        Ok(Self {
            j,
            frame: *frame,
            plus_basis,
            basis_matrix: v.clone(),
        })
    }

    /// `J = m·I` with the standard basis.
    pub fn standard(n: usize, frame: &SliceFrame<T>) -> Self {
        Self::from_unitary(&QMatrix::identity(n), frame).expect("identity is unitary")
    }

    /// Dimension of the ambient space ℍⁿ.
    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    /// Matrix whose columns are the `H₊` basis.
    pub fn basis_matrix(&self) -> &QMatrix<T> {
        &self.basis_matrix
    }

    /// Largest violation among `J* = −J`, `J² = −I` and `Jz = z·m` on the basis.
    pub fn structure_error(&self) -> T {
        let n = self.dim();
        let anti = (&self.j.adjoint() + &self.j).frobenius_norm();
        let square = (&(&self.j * &self.j) + &QMatrix::identity(n)).frobenius_norm();
        let eig = self
            .plus_basis
            .vectors()
            .iter()
            .map(|z| self.j.apply(z).expect("dim").dist(&z.scale_right(self.frame.m())))
            .fold(T::zero(), T::max);
        anti.max(square).max(eig)
    }

    /// `P₊x = ½(x − J x m)`.
    pub fn project_plus(&self, x: &QVector<T>) -> Result<QVector<T>> {
        let jxm = self.j.apply(x)?.scale_right(self.frame.m());
        Ok((x - &jxm).scale_real(T::half()))
    }

    /// `P₋x = ½(x + J x m)`.
    pub fn project_minus(&self, x: &QVector<T>) -> Result<QVector<T>> {
        let jxm = self.j.apply(x)?.scale_right(self.frame.m());
        Ok((x + &jxm).scale_real(T::half()))
    }

    fn check_commutes(&self, a: &QMatrix<T>) -> Result<T> {
        if a.rows() != self.dim() || a.cols() != self.dim() {
            return Err(SpectraError::DimensionMismatch {
                expected: format!("{n}x{n}", n = self.dim()),
                found: format!("{}x{}", a.rows(), a.cols()),
            });
        }
        let scale = a.frobenius_norm();
        let comm = a.commutator_norm(&self.j);
        let tol = T::lit(1e-9) * scale;
        if !(comm <= tol) {
            return Err(SpectraError::NotCommuting {
                commutator: comm.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(tol.max(T::slice_tol() * scale))
    }

    /// The `C_m` matrix `⟨z_k|A z_l⟩` of `A` restricted to `H₊`.
    pub fn restrict_plus(&self, a: &QMatrix<T>) -> Result<CMatrix<T>> {
        let tol = self.check_commutes(a)?;
        let z = &self.basis_matrix;
        let t = &(&z.adjoint() * a) * z;
        CMatrix::with_tolerance(self.frame, t.rows(), t.cols(), t.entries().to_vec(), tol)
    }

    /// The `C_m` matrix of `A` restricted to `H₋`, in the basis `z_k·n`.
    pub fn restrict_minus(&self, a: &QMatrix<T>) -> Result<CMatrix<T>> {
        let tol = self.check_commutes(a)?;
        let n = self.frame.n();
        let zn = self.basis_matrix.scale_columns(&vec![n; self.dim()]);
        let t = &(&zn.adjoint() * a) * &zn;
        CMatrix::with_tolerance(self.frame, t.rows(), t.cols(), t.entries().to_vec(), tol)
    }

    /// The unique right ℍ-linear `T̃` agreeing with `T₊` on `H₊`:
    /// `T̃x = T(x₁) − T(x₂·n)·n` for `x = x₁ + x₂`, `x₁ ∈ H₊`, `x₂ ∈ H₋`.
    /// In matrix form this is `Z·T₊·Z*`.
    pub fn extend(&self, tplus: &CMatrix<T>) -> Result<QMatrix<T>> {
        self.extend_to(tplus, self)
    }

    /// Extension of `U: H₁₊ → H₂₊` to `Ũ: ℍ^{n₁} → ℍ^{n₂}`; `self` is the source structure.
    pub fn extend_to(&self, u: &CMatrix<T>, target: &SliceStructure<T>) -> Result<QMatrix<T>> {
        if u.cols() != self.dim() || u.rows() != target.dim() {
            return Err(SpectraError::DimensionMismatch {
                expected: format!("{}x{}", target.dim(), self.dim()),
                found: format!("{}x{}", u.rows(), u.cols()),
            });
        }
        if u.frame().m().dist(&self.frame.m()) > T::slice_tol()
            || target.frame.m().dist(&self.frame.m()) > T::slice_tol()
        {
            return Err(SpectraError::DimensionMismatch {
                expected: format!("slice C_m with m = {}", self.frame.m()),
                found: format!("m = {}", u.frame().m()),
            });
        }
        Ok(&(&target.basis_matrix * &u.to_qmatrix()) * &self.basis_matrix.adjoint())
    }

    /// The literal coordinate form of the extension, applied to one vector.
    pub fn apply_extension(&self, tplus: &CMatrix<T>, x: &QVector<T>) -> Result<QVector<T>> {
        let x1 = self.project_plus(x)?;
        let x2n = self.project_minus(x)?.scale_right(self.frame.n());
        let on_plus = |y: &QVector<T>| -> Result<QVector<T>> {
            // T acts on H₊ through coordinates c_k = ⟨z_k|y⟩ ∈ C_m
            let coeffs = self.plus_basis.expand(y)?;
            let mut out = QVector::zeros(self.dim());
            for k in 0..self.dim() {
                let c: Quaternion<T> = (0..self.dim()).map(|l| tplus.get(k, l) * coeffs[l]).sum();
                out.add_scaled(&self.plus_basis.vectors()[k], c);
            }
            Ok(out)
        };
        let t1 = on_plus(&x1)?;
        let t2 = on_plus(&x2n)?.scale_right(self.frame.n());
        Ok(&t1 - &t2)
    }
}

/// `J` and `H₊` from a spectral decomposition: `J = V·(m·I)·V*`.
pub fn build_j<T: Real>(dec: &SpectralDecomposition<T>) -> Result<SliceStructure<T>> {
    SliceStructure::from_unitary(&dec.v, &dec.frame)
}

/// Extension of a rectangular `C_m` matrix between two slice structures.
pub fn extend_between<T: Real>(
    u: &CMatrix<T>,
    source: &SliceStructure<T>,
    target: &SliceStructure<T>,
) -> Result<QMatrix<T>> {
    source.extend_to(u, target)
}

/// `K × K` for `K = C_mᵈ`, made into a right quaternionic Hilbert space.
#[derive(Clone, Copy, Debug)]
pub struct QuaternionifiedSpace<T> {
    pub complex_dim: usize,
    pub frame: SliceFrame<T>,
}

/// An element `(x, y)` of `K × K`, identified with `x + y·n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlicePair<T> {
    pub x: Vec<Quaternion<T>>,
    pub y: Vec<Quaternion<T>>,
}

pub fn quaternionify<T: Real>(complex_dim: usize, frame: &SliceFrame<T>) -> Result<QuaternionifiedSpace<T>> {
    if complex_dim == 0 {
        return Err(SpectraError::DimensionMismatch {
            expected: "complexDim >= 1".into(),
            found: "0".into(),
        });
    }
    Ok(QuaternionifiedSpace {
        complex_dim,
        frame: *frame,
    })
}

impl<T: Real> QuaternionifiedSpace<T> {
    pub fn pair(&self, x: Vec<Quaternion<T>>, y: Vec<Quaternion<T>>) -> Result<SlicePair<T>> {
        for v in [&x, &y] {
            if v.len() != self.complex_dim {
                return Err(SpectraError::LengthMismatch {
                    left: self.complex_dim,
                    right: v.len(),
                });
            }
        }
        let proj = |v: Vec<Quaternion<T>>| -> Result<Vec<Quaternion<T>>> {
            v.iter()
                .enumerate()
                .map(|(i, q)| self.frame.project(q, T::slice_tol() * q.norm().max(T::one()), i))
                .collect()
        };
        Ok(SlicePair { x: proj(x)?, y: proj(y)? })
    }

    pub fn zero(&self) -> SlicePair<T> {
        SlicePair {
            x: vec![Quaternion::zero(); self.complex_dim],
            y: vec![Quaternion::zero(); self.complex_dim],
        }
    }

    pub fn add(&self, p: &SlicePair<T>, q: &SlicePair<T>) -> SlicePair<T> {
        let sum = |a: &[Quaternion<T>], b: &[Quaternion<T>]| a.iter().zip(b).map(|(u, v)| *u + *v).collect();
        SlicePair {
            x: sum(&p.x, &q.x),
            y: sum(&p.y, &q.y),
        }
    }

    /// `(x, y)·(α + β·n) = (xα − y·β̄, xβ + y·ᾱ)`, the action inherited from
    /// `(x + y·n)(α + β·n)` via `n·z = z̄·n`.
    pub fn scale(&self, p: &SlicePair<T>, q: &Quaternion<T>) -> SlicePair<T> {
        let (alpha, beta) = self.frame.split(q);
        let (ab, bb) = (alpha.conj(), beta.conj());
        SlicePair {
            x: p.x.iter().zip(&p.y).map(|(x, y)| *x * alpha - *y * bb).collect(),
            y: p.x.iter().zip(&p.y).map(|(x, y)| *x * beta + *y * ab).collect(),
        }
    }

    /// Naive action `(x, y)·(α + β·n) = (xα − yβ, xβ − yα)`. Not associative;
    /// kept as a regression reference.
    pub fn scale_literal(&self, p: &SlicePair<T>, q: &Quaternion<T>) -> SlicePair<T> {
        let (alpha, beta) = self.frame.split(q);
        SlicePair {
            x: p.x.iter().zip(&p.y).map(|(x, y)| *x * alpha - *y * beta).collect(),
            y: p.x.iter().zip(&p.y).map(|(x, y)| *x * beta - *y * alpha).collect(),
        }
    }

    /// `⟨(x,y)|(z,w)⟩ = [⟨x|z⟩ + ⟨w|y⟩] + [⟨x|w⟩ − ⟨z|y⟩]·n`.
    pub fn inner(&self, p: &SlicePair<T>, q: &SlicePair<T>) -> Quaternion<T> {
        let k = |a: &[Quaternion<T>], b: &[Quaternion<T>]| -> Quaternion<T> {
            a.iter().zip(b).map(|(u, v)| u.conj() * *v).sum()
        };
        let first = k(&p.x, &q.x) + k(&q.y, &p.y);
        let second = k(&p.x, &q.y) - k(&q.x, &p.y);
        first + second * self.frame.n()
    }

    pub fn norm_sqr(&self, p: &SlicePair<T>) -> T {
        p.x.iter().chain(&p.y).map(Quaternion::norm_sqr).sum()
    }

    pub fn to_qvector(&self, p: &SlicePair<T>) -> QVector<T> {
        QVector::new(p.x.iter().zip(&p.y).map(|(x, y)| self.frame.combine(x, y)).collect())
    }

    pub fn from_qvector(&self, v: &QVector<T>) -> SlicePair<T> {
        let (x, y) = v.iter().map(|q| self.frame.split(q)).unzip();
        SlicePair { x, y }
    }

    /// `J(x + y·n) = (x − y·n)·m`.
    pub fn j(&self, p: &SlicePair<T>) -> SlicePair<T> {
        let flipped = SlicePair {
            x: p.x.clone(),
            y: p.y.iter().map(|y| -*y).collect(),
        };
        self.scale(&flipped, &self.frame.m())
    }

    /// `J` as a matrix on ℍᵈ under `(x, y) ↦ x + y·n`; equals `m·I`.
    pub fn j_matrix(&self) -> QMatrix<T> {
        let d = self.complex_dim;
        QMatrix::from_columns(
            &(0..d)
                .map(|k| {
                    let p = self.from_qvector(&QVector::unit(d, k));
                    self.to_qvector(&self.j(&p))
                })
                .collect::<Vec<_>>(),
        )
        .expect("equal lengths")
    }

    /// `P₊(p) = ½(p − J(p)·m)`.
    pub fn project_plus(&self, p: &SlicePair<T>) -> SlicePair<T> {
        let jm = self.scale(&self.j(p), &self.frame.m());
        let diff = self.add(p, &self.scale(&jm, &Quaternion::from_real(-T::one())));
        self.scale(&diff, &Quaternion::from_real(T::half()))
    }
}
