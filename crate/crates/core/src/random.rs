//! Seeded generators for test and verification inputs.
//!
//! Backed by ChaCha8 so a seed reproduces bit-identical data on every platform.

use std::marker::PhantomData;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bridge::{CMatrix, ComplexMatrix};
use crate::qmodule::{gram_schmidt, HilbertBasis, QVector};
use crate::qoperator::QMatrix;
use crate::quaternion::{ImaginaryUnit, Quaternion, SliceFrame};
use crate::scalar::Real;

pub struct Gen<T> {
    rng: ChaCha8Rng,
    _scalar: PhantomData<T>,
}

impl<T: Real> Gen<T> {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            _scalar: PhantomData,
        }
    }

    /// Uniform in `[-1, 1)`.
    pub fn real(&mut self) -> T {
        T::lit(self.rng.gen_range(-1.0..1.0))
    }

    pub fn real_in(&mut self, lo: f64, hi: f64) -> T {
        T::lit(self.rng.gen_range(lo..hi))
    }

    pub fn index(&mut self, upper: usize) -> usize {
        self.rng.gen_range(0..upper)
    }

    pub fn quaternion(&mut self) -> Quaternion<T> {
        Quaternion::new(self.real(), self.real(), self.real(), self.real())
    }

    /// Non-zero quaternion (rejection sampled away from the origin).
    pub fn nonzero_quaternion(&mut self) -> Quaternion<T> {
        loop {
            let q = self.quaternion();
            if q.norm() > T::lit(0.1) {
                return q;
            }
        }
    }

    pub fn unit_imaginary(&mut self) -> ImaginaryUnit<T> {
        loop {
            let q = self.quaternion().im();
            if q.norm() > T::lit(0.1) {
                return ImaginaryUnit::normalized(q).expect("non-zero pure quaternion");
            }
        }
    }

    /// A value `α + mβ` of the slice.
    pub fn slice_value(&mut self, f: &SliceFrame<T>) -> Quaternion<T> {
        f.slice_value(self.real(), self.real())
    }

    /// A value of the closed upper half-slice `C_m⁺`.
    pub fn upper_slice_value(&mut self, f: &SliceFrame<T>) -> Quaternion<T> {
        let beta = self.real().abs();
        f.slice_value(self.real(), beta)
    }

    pub fn vector(&mut self, n: usize) -> QVector<T> {
        QVector::new((0..n).map(|_| self.quaternion()).collect())
    }

    pub fn slice_vector(&mut self, n: usize, f: &SliceFrame<T>) -> QVector<T> {
        QVector::new((0..n).map(|_| self.slice_value(f)).collect())
    }

    pub fn matrix(&mut self, n: usize) -> QMatrix<T> {
        QMatrix::from_fn(n, n, |_, _| self.quaternion())
    }

    pub fn unitary_basis(&mut self, n: usize) -> HilbertBasis<T> {
        loop {
            let vs: Vec<QVector<T>> = (0..n).map(|_| self.vector(n)).collect();
            if let Ok(b) = gram_schmidt(&vs) {
                return b;
            }
        }
    }

    pub fn unitary(&mut self, n: usize) -> QMatrix<T> {
        QMatrix::from_columns(self.unitary_basis(n).vectors()).expect("equal lengths")
    }

    /// `W·diag(d)·W*` for a random unitary `W`.
    pub fn normal_with_spectrum(&mut self, d: &[Quaternion<T>]) -> QMatrix<T> {
        let w = self.unitary(d.len());
        &w.scale_columns(d) * &w.adjoint()
    }

    /// Random normal matrix with spectrum drawn from `C_i⁺`.
    pub fn normal(&mut self, n: usize) -> QMatrix<T> {
        let f = SliceFrame::standard();
        let d: Vec<_> = (0..n).map(|_| self.upper_slice_value(&f)).collect();
        self.normal_with_spectrum(&d)
    }

    /// [`normal`](Self::normal) together with the diagonal it was built from.
    pub fn normal_with_known_spectrum(&mut self, n: usize) -> (QMatrix<T>, Vec<Quaternion<T>>) {
        let f = SliceFrame::standard();
        let d: Vec<_> = (0..n).map(|_| self.upper_slice_value(&f)).collect();
        (self.normal_with_spectrum(&d), d)
    }

    /// Random normal matrix whose spectrum lies in `C_i⁺`, scaled so that
    /// every eigenvalue has modulus at least `floor`.
    pub fn normal_nonvanishing(&mut self, n: usize, floor: f64) -> QMatrix<T> {
        let f = SliceFrame::standard();
        let d: Vec<_> = (0..n)
            .map(|_| loop {
                let v = self.upper_slice_value(&f);
                if v.norm() >= T::lit(floor) {
                    break v;
                }
            })
            .collect();
        self.normal_with_spectrum(&d)
    }

    /// `B − B*`.
    pub fn anti_self_adjoint(&mut self, n: usize) -> QMatrix<T> {
        let b = self.matrix(n);
        &b - &b.adjoint()
    }

    /// Normal with unit-modulus spectrum.
    pub fn unitary_normal(&mut self, n: usize) -> QMatrix<T> {
        let f = SliceFrame::standard();
        let d: Vec<_> = (0..n)
            .map(|_| {
                let t = self.real_in(0.0, std::f64::consts::PI);
                f.slice_value(t.cos(), t.sin())
            })
            .collect();
        self.normal_with_spectrum(&d)
    }

    /// Self-adjoint, real spectrum.
    pub fn self_adjoint(&mut self, n: usize) -> QMatrix<T> {
        let d: Vec<_> = (0..n).map(|_| Quaternion::from_real(self.real())).collect();
        self.normal_with_spectrum(&d)
    }

    fn complex(&mut self) -> Complex<T> {
        Complex::new(self.real(), self.real())
    }

    /// Random complex unitary via Gram–Schmidt on random columns.
    fn complex_unitary(&mut self, n: usize) -> ComplexMatrix<T> {
        let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
        while cols.len() < n {
            let mut v: Vec<Complex<T>> = (0..n).map(|_| self.complex()).collect();
            for _ in 0..2 {
                for c in &cols {
                    let dot: Complex<T> = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(c) {
                        *x -= dot * y;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if norm > T::lit(1e-6) {
                cols.push(v.iter().map(|z| z / norm).collect());
            }
        }
        ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
    }

    pub fn complex_matrix(&mut self, n: usize, f: &SliceFrame<T>) -> CMatrix<T> {
        let m = ComplexMatrix::from_fn(n, n, |_, _| self.complex());
        CMatrix::from_complex(*f, &m)
    }

    /// Random normal `C_m` matrix `U·diag(λ)·U*`.
    pub fn complex_normal(&mut self, n: usize, f: &SliceFrame<T>) -> CMatrix<T> {
        let u = self.complex_unitary(n);
        let d: Vec<Complex<T>> = (0..n).map(|_| self.complex()).collect();
        CMatrix::from_complex(*f, &(&u.scale_columns(&d) * &u.adjoint()))
    }

    /// Random complex unitary as a `C_m` matrix.
    pub fn complex_unitary_matrix(&mut self, n: usize, f: &SliceFrame<T>) -> CMatrix<T> {
        let u = self.complex_unitary(n);
        CMatrix::from_complex(*f, &u)
    }
}
