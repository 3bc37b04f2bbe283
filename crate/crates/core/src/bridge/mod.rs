//! The slice embedding of quaternionic matrices into complex matrices of
//! doubled size, and the quaternionic spectral decomposition built on it.
//!
//! Fix a frame `(m, n)` and write a vector as `x = x₁ + x₂·n` with
//! `x₁, x₂ ∈ C_mⁿ`, and a matrix as `A = A₁ + A₂·n` entrywise. Using
//! `n·z = z̄·n` for `z ∈ C_m`,
//!
//! ```text
//! Ax = (A₁x₁ − A₂x̄₂) + (A₁x₂ + A₂x̄₁)·n
//! ```
//!
//! so in the coordinates `ι(x) = (x₁ ; x̄₂)` the action is the complex matrix
//!
//! ```text
//! χ(A) = [[A₁, −A₂], [Ā₂, Ā₁]],     ι(Ax) = χ(A)·ι(x),   ι(x·λ) = ι(x)·λ  (λ ∈ C_m).
//! ```
//!
//! A complex eigenvector `(u ; v)` of `χ(A)` for `λ` therefore lifts to the
//! quaternionic eigenvector `u + v̄·n` with `A(u + v̄·n) = (u + v̄·n)·λ`.

pub mod dense;
pub mod eigen;

use num_complex::Complex;

pub use dense::ComplexMatrix;
pub use eigen::{sigma_max, sigma_min};

use crate::error::{Result, SpectraError};
use crate::qmodule::QVector;
use crate::qoperator::QMatrix;
use crate::quaternion::{Quaternion, SimilarityOrbit, SliceFrame};
use crate::scalar::Real;

/// A matrix with entries in the slice `C_m` of a fixed frame, stored as
/// quaternions whose `n`- and `mn`-components vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    frame: SliceFrame<T>,
    rows: usize,
    cols: usize,
    entries: Vec<Quaternion<T>>,
}

impl<T: Real> CMatrix<T> {
    /// Checks every entry lies in `C_m` to `slice_tol` relative to the largest
    /// entry, then strips the residual off-slice mass.
    pub fn new(frame: SliceFrame<T>, rows: usize, cols: usize, entries: Vec<Quaternion<T>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(SpectraError::LengthMismatch {
                left: rows * cols,
                right: entries.len(),
            });
        }
        let scale = entries.iter().map(Quaternion::norm).fold(T::one(), T::max);
        Self::with_tolerance(frame, rows, cols, entries, T::slice_tol() * scale)
    }

    /// As [`CMatrix::new`] with an explicit absolute tolerance on off-slice mass.
    pub fn with_tolerance(
        frame: SliceFrame<T>,
        rows: usize,
        cols: usize,
        entries: Vec<Quaternion<T>>,
        tol: T,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(SpectraError::LengthMismatch {
                left: rows * cols,
                right: entries.len(),
            });
        }
        let entries = entries
            .iter()
            .enumerate()
            .map(|(i, q)| frame.project(q, tol, i))
            .collect::<Result<_>>()?;
        Ok(Self {
            frame,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_complex(frame: SliceFrame<T>, m: &ComplexMatrix<T>) -> Self {
        Self {
            frame,
            rows: m.rows(),
            cols: m.cols(),
            entries: m.data().iter().map(|z| frame.from_complex(*z)).collect(),
        }
    }

    pub fn identity(frame: SliceFrame<T>, n: usize) -> Self {
        Self::from_complex(frame, &ComplexMatrix::identity(n))
    }

    pub fn to_complex(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self.frame.to_complex(&self.get(i, j)))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quaternion<T> {
        self.entries[i * self.cols + j]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn frame(&self) -> &SliceFrame<T> {
        &self.frame
    }

    pub fn entries(&self) -> &[Quaternion<T>] {
        &self.entries
    }

    /// The same entries viewed as a quaternionic matrix.
    pub fn to_qmatrix(&self) -> QMatrix<T> {
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_complex(self.frame, &self.to_complex().adjoint())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_complex(self.frame, &(&self.to_complex() * &other.to_complex()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.to_complex().frobenius_norm()
    }

    pub fn op_norm(&self) -> Result<T> {
        sigma_max(&self.to_complex())
    }

    pub fn is_normal(&self, tol: T) -> bool {
        let c = self.to_complex();
        let s = c.frobenius_norm();
        c.is_square() && c.normality_defect() <= tol * s * s
    }

    /// `Δ_q` computed in the complex algebra: `N² − N·2re(q) + I·|q|²`.
    pub fn delta(&self, q: &Quaternion<T>) -> Self {
        let c = self.to_complex();
        let mut out = &c * &c;
        let two_re = Complex::new(T::two() * q.re(), T::zero());
        out = &out - &c.scale(two_re);
        let n2 = Complex::new(q.norm_sqr(), T::zero());
        out = &out + &ComplexMatrix::identity(self.rows).scale(n2);
        Self::from_complex(self.frame, &out)
    }
}

/// `χ(A)` for a fixed frame.
#[derive(Clone, Debug)]
pub struct ChiImage<T> {
    pub frame: SliceFrame<T>,
    pub cm: CMatrix<T>,
}

pub(crate) fn chi_dense<T: Real>(a: &QMatrix<T>, f: &SliceFrame<T>) -> ComplexMatrix<T> {
    let (r, c) = (a.rows(), a.cols());
    let split: Vec<(Complex<T>, Complex<T>)> = a
        .entries()
        .iter()
        .map(|q| {
            let (a1, a2) = f.split(q);
            (f.to_complex(&a1), f.to_complex(&a2))
        })
        .collect();
    ComplexMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let (bi, ii) = (i / r, i % r);
        let (bj, jj) = (j / c, j % c);
        let (a1, a2) = split[ii * c + jj];
        match (bi, bj) {
            (0, 0) => a1,
            (0, _) => -a2,
            (_, 0) => a2.conj(),
            _ => a1.conj(),
        }
    })
}

/// Reads a quaternionic matrix back from a complex matrix of doubled size,
/// averaging the two copies of each block: `A₁ = (C₁₁ + C̄₂₂)/2`,
/// `A₂ = (C̄₂₁ − C₁₂)/2`.
pub(crate) fn unchi_dense<T: Real>(c: &ComplexMatrix<T>, f: &SliceFrame<T>) -> QMatrix<T> {
    let (r, k) = (c.rows() / 2, c.cols() / 2);
    let half = T::half();
    QMatrix::from_fn(r, k, |i, j| {
        let a1 = (c[(i, j)] + c[(r + i, k + j)].conj()) * half;
        let a2 = (c[(r + i, j)].conj() - c[(i, k + j)]) * half;
        f.combine(&f.from_complex(a1), &f.from_complex(a2))
    })
}

pub fn chi<T: Real>(a: &QMatrix<T>, f: &SliceFrame<T>) -> ChiImage<T> {
    ChiImage {
        frame: *f,
        cm: CMatrix::from_complex(*f, &chi_dense(a, f)),
    }
}

/// `ι(x) = (x₁ ; x̄₂)`.
pub fn iota<T: Real>(x: &QVector<T>, f: &SliceFrame<T>) -> Vec<Complex<T>> {
    let (mut top, mut bottom) = (Vec::with_capacity(x.len()), Vec::with_capacity(x.len()));
    for q in x.iter() {
        let (a, b) = f.split(q);
        top.push(f.to_complex(&a));
        bottom.push(f.to_complex(&b).conj());
    }
    top.extend(bottom);
    top
}

/// Inverse of [`iota`]: `(u ; v) ↦ u + v̄·n`.
pub fn lift<T: Real>(w: &[Complex<T>], f: &SliceFrame<T>) -> QVector<T> {
    let n = w.len() / 2;
    QVector::new(
        (0..n)
            .map(|i| f.combine(&f.from_complex(w[i]), &f.from_complex(w[n + i].conj())))
            .collect(),
    )
}

/// Output of [`eig_normal_complex`].
#[derive(Clone, Debug)]
pub struct ComplexEigen<T> {
    pub vectors: CMatrix<T>,
    pub values: Vec<Quaternion<T>>,
    pub residual: T,
}

/// Eigendecomposition `NW = W·diag(vals)` of a normal `C_m` matrix.
///
/// Values come in descending lexicographic order of `(re, β)` for `α + mβ`.
pub fn eig_normal_complex<T: Real>(n: &CMatrix<T>) -> Result<ComplexEigen<T>> {
    let e = eigen::eig_normal(&n.to_complex())?;
    Ok(ComplexEigen {
        vectors: CMatrix::from_complex(*n.frame(), &e.vectors),
        values: e.values.iter().map(|z| n.frame().from_complex(*z)).collect(),
        residual: e.residual,
    })
}

/// `A = V·diag(d)·V*` with `V` unitary and every `d_k ∈ C_m⁺`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition<T> {
    pub v: QMatrix<T>,
    pub d: Vec<Quaternion<T>>,
    pub frame: SliceFrame<T>,
    /// `‖AV − V·diag(d)‖_F`.
    pub residual: T,
}

impl<T: Real> SpectralDecomposition<T> {
    /// `V·diag(d)·V*`.
    pub fn reconstruct(&self) -> QMatrix<T> {
        &self.v.scale_columns(&self.d) * &self.v.adjoint()
    }

    pub fn orbits(&self) -> Vec<SimilarityOrbit<T>> {
        self.d.iter().map(SimilarityOrbit::of).collect()
    }

    /// `‖V*V − I‖_F`.
    pub fn unitarity_error(&self) -> T {
        let n = self.v.cols();
        (&(&self.v.adjoint() * &self.v) - &QMatrix::identity(n)).frobenius_norm()
    }
}

/// Quaternionic spectral decomposition of a normal matrix relative to `f`.
///
/// Eigenpairs of `χ(A)` are clustered; clusters in the open upper half of
/// `C_m` lift one quaternionic eigenvector per complex one, while clusters
/// straddling the real axis hold conjugate copies of the same quaternionic
/// eigenspace and contribute only half of their lifts, chosen by pivoted
/// Gram–Schmidt.
pub fn spectral_decompose<T: Real>(a: &QMatrix<T>, f: &SliceFrame<T>) -> Result<SpectralDecomposition<T>> {
    if !a.is_square() {
        return Err(SpectraError::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let n = a.n();
    let scale = a.frobenius_norm();
    let defect = a.normality_defect();
    if !(defect <= T::check_tol() * scale * scale) {
        return Err(SpectraError::NotNormal {
            commutator: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let chi = chi_dense(a, f);
    let e = eigen::eig_normal(&chi)?;
    let vals = &e.values;
    let dim = vals.len();

    let max_abs = vals.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let ctol = T::cluster_tol() * max_abs;
    let clusters = cluster(vals, ctol);

    let mut accepted: Vec<QVector<T>> = Vec::with_capacity(n);
    for members in &clusters {
        let upper = members.iter().all(|&k| vals[k].im > ctol);
        let lower = members.iter().all(|&k| vals[k].im < -ctol);
        if lower {
            continue;
        }
        let take = if upper { members.len() } else { members.len() / 2 };
        let mut candidates: Vec<QVector<T>> = members.iter().map(|&k| lift(&e.vectors.column(k), f)).collect();
        for z in &accepted {
            project_out(&mut candidates, z);
        }
        for _ in 0..take {
            let (best, r) = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.norm()))
                .fold((usize::MAX, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best == usize::MAX || r < T::lit(1e-3) {
                return Err(SpectraError::PairingFailure {
                    found: accepted.len(),
                    expected: n,
                });
            }
            let mut z = candidates.remove(best);
            for prev in &accepted {
                let c = prev.inner_unchecked(&z);
                z.sub_scaled(prev, c);
            }
            let z = z.scale_real(z.norm().recip());
            project_out(&mut candidates, &z);
            accepted.push(z);
        }
    }
    if accepted.len() != n || 2 * n != dim {
        return Err(SpectraError::PairingFailure {
            found: accepted.len(),
            expected: n,
        });
    }

    let mut pairs: Vec<(QVector<T>, Quaternion<T>)> = accepted
        .into_iter()
        .map(|v| {
            let av = a.apply(&v).expect("square operator");
            let rq = v.inner_unchecked(&av);
            let c = f.to_complex(&rq);
            let (v, c) = if c.im < T::zero() {
                (v.scale_right(f.n()), c.conj())
            } else {
                (v, c)
            };
            (normalize_phase(v, f), f.from_complex(c))
        })
        .collect();
    pairs.sort_by(|x, y| eigen::cmp_desc(&f.to_complex(&x.1), &f.to_complex(&y.1)));

    let (columns, d): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let v = QMatrix::from_columns(&columns)?;
    let residual = (&(a * &v) - &v.scale_columns(&d)).frobenius_norm();
    Ok(SpectralDecomposition {
        v,
        d,
        frame: *f,
        residual,
    })
}

fn project_out<T: Real>(candidates: &mut [QVector<T>], z: &QVector<T>) {
    for c in candidates.iter_mut() {
        let coeff = z.inner_unchecked(c);
        c.sub_scaled(z, coeff);
    }
}

/// Single-linkage clusters of values closer than `tol`, in order of first member.
fn cluster<T: Real>(vals: &[Complex<T>], tol: T) -> Vec<Vec<usize>> {
    let n = vals.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for a in 0..n {
        for b in a + 1..n {
            if (vals[a] - vals[b]).norm() <= tol {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Right-multiplies by a unit of `C_m` so the largest entry's `C_m` part is
/// real and positive (or, if that part vanishes, its `n` part).
fn normalize_phase<T: Real>(v: QVector<T>, f: &SliceFrame<T>) -> QVector<T> {
    let mut pivot = 0;
    let mut best = T::zero();
    for (i, q) in v.iter().enumerate() {
        let r = q.norm();
        if r > best * (T::one() + T::lit(1e-9)) {
            best = r;
            pivot = i;
        }
    }
    if best == T::zero() {
        return v;
    }
    let (a, b) = f.split(&v[pivot]);
    // (a + b·n)·c = a·c + b·c̄·n
    let c = if a.norm() > T::rank_tol() * best {
        a.conj().scale(a.norm().recip())
    } else {
        b.scale(b.norm().recip())
    };
    v.scale_right(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Gen;

    type Q = Quaternion<f64>;
    type M = QMatrix<f64>;

    fn frame() -> SliceFrame<f64> {
        SliceFrame::standard()
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn chi_examples() {
        let x = chi(&M::from_diag(&[Q::j()]), &frame()).cm.to_complex();
        assert_eq!(x.data(), &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let x = chi(&M::from_diag(&[Q::i()]), &frame()).cm.to_complex();
        assert_eq!(x.data(), &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]);
        let x = chi(&M::identity(3), &frame()).cm.to_complex();
        assert_eq!(x, ComplexMatrix::identity(6));
    }

    #[test]
    fn iota_contract() {
        let mut g = Gen::<f64>::new(11);
        for &m in &[Q::i(), Q::new(0.0, 0.3, -0.4, 0.5)] {
            let f = SliceFrame::complete(crate::ImaginaryUnit::normalized(m).unwrap());
            let a = g.matrix(4);
            let x = g.vector(4);
            let lam = f.slice_value(0.7, -1.3);
            let chi_a = chi_dense(&a, &f);
            let lhs = iota(&a.apply(&x).unwrap(), &f);
            let rhs = chi_a.apply(&iota(&x, &f));
            let err: f64 = lhs.iter().zip(&rhs).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
            assert!(err < 1e-12);
            let lx = iota(&x.scale_right(lam), &f);
            let xl: Vec<_> = iota(&x, &f).iter().map(|z| z * f.to_complex(&lam)).collect();
            let err: f64 = lx.iter().zip(&xl).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
            assert!(err < 1e-12);
            assert!(lift(&iota(&x, &f), &f).dist(&x) < 1e-14);
        }
    }

    #[test]
    fn unchi_inverts_chi() {
        let mut g = Gen::<f64>::new(77);
        let fr = SliceFrame::complete(g.unit_imaginary());
        let a = QMatrix::from_fn(3, 2, |_, _| g.quaternion());
        assert!((&unchi_dense(&chi_dense(&a, &fr), &fr) - &a).frobenius_norm() < 1e-14);
    }

    #[test]
    fn chi_is_a_star_homomorphism() {
        let mut g = Gen::<f64>::new(3);
        let f = frame();
        for n in 1..6 {
            let (a, b) = (g.matrix(n), g.matrix(n));
            let lhs = chi_dense(&(&a * &b), &f);
            let rhs = &chi_dense(&a, &f) * &chi_dense(&b, &f);
            assert!((&lhs - &rhs).frobenius_norm() < 1e-12);
            let adj = chi_dense(&a.adjoint(), &f);
            assert!((&adj - &chi_dense(&a, &f).adjoint()).frobenius_norm() < 1e-14);
        }
    }

    #[test]
    fn decompose_single_j() {
        let d = spectral_decompose(&M::from_diag(&[Q::j()]), &frame()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(d.d[0].dist(&Q::i()) < 1e-14);
        assert!(d.v[(0, 0)].dist(&Q::new(s, 0.0, 0.0, s)) < 1e-14);
        assert!(d.residual < 1e-14);
    }

    #[test]
    fn decompose_diag_i_j() {
        let a = M::from_diag(&[Q::i(), Q::j()]);
        let d = spectral_decompose(&a, &frame()).unwrap();
        for v in &d.d {
            assert!(v.dist(&Q::i()) < 1e-13);
        }
        assert!(d.unitarity_error() < 1e-13);
        assert!((&d.reconstruct() - &a).frobenius_norm() < 1e-13);
    }

    #[test]
    fn decompose_real_scalar() {
        let a = M::identity(4).scale_real(2.5);
        let d = spectral_decompose(&a, &frame()).unwrap();
        assert_eq!(d.d, vec![Q::from_real(2.5); 4]);
        assert_eq!(d.v, M::identity(4));
    }

    #[test]
    fn decompose_rejects_non_normal() {
        let a = M::from_rows(vec![vec![Q::zero(), Q::one()], vec![Q::zero(), Q::zero()]]).unwrap();
        assert!(matches!(spectral_decompose(&a, &frame()), Err(SpectraError::NotNormal { .. })));
    }

    #[test]
    fn decompose_repeated_real_and_conjugate_eigenvalues() {
        let mut g = Gen::<f64>::new(21);
        let f = frame();
        let d = [
            Q::from_real(1.0),
            Q::from_real(1.0),
            f.slice_value(0.5, 2.0),
            f.slice_value(0.5, 2.0),
            Q::from_real(-3.0),
        ];
        let a = g.normal_with_spectrum(&d);
        let dec = spectral_decompose(&a, &f).unwrap();
        assert!(dec.residual < 1e-12 * a.frobenius_norm());
        assert!(dec.unitarity_error() < 1e-12);
        let mut got: Vec<_> = dec.orbits();
        let mut want: Vec<_> = d.iter().map(SimilarityOrbit::of).collect();
        let key = |o: &SimilarityOrbit<f64>| (o.re, o.im_norm);
        got.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        want.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for (x, y) in got.iter().zip(&want) {
            assert!(x.distance(y) < 1e-10);
        }
    }

    #[test]
    fn orbits_are_frame_covariant() {
        let mut g = Gen::<f64>::new(8);
        let a = g.normal(6);
        let f1 = frame();
        let f2 = SliceFrame::complete(crate::ImaginaryUnit::normalized(Q::new(0.0, 0.2, -0.7, 0.4)).unwrap());
        let mut o1 = spectral_decompose(&a, &f1).unwrap().orbits();
        let mut o2 = spectral_decompose(&a, &f2).unwrap().orbits();
        let key = |o: &SimilarityOrbit<f64>| (o.re, o.im_norm);
        o1.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        o2.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for (x, y) in o1.iter().zip(&o2) {
            assert!(x.distance(y) < 1e-9);
        }
    }

    #[test]
    fn chi_eigenvalues_pair_up() {
        let mut g = Gen::<f64>::new(4);
        let a = g.normal(5);
        let e = eigen::eig_normal(&chi_dense(&a, &frame())).unwrap();
        for v in e.values.iter().filter(|v| v.im > 1e-9) {
            assert!(e.values.iter().any(|w| (w - v.conj()).norm() < 1e-9));
        }
    }

    #[test]
    fn eig_normal_complex_residual() {
        let mut g = Gen::<f64>::new(9);
        let f = frame();
        let a = g.normal(4);
        let image = chi(&a, &f);
        let e = eig_normal_complex(&image.cm).unwrap();
        assert!(e.residual <= 1e-10 * image.cm.op_norm().unwrap());
        assert_eq!(e.values.len(), 8);
    }

    #[test]
    fn cmatrix_rejects_off_slice_entries() {
        let err = CMatrix::new(frame(), 1, 2, vec![Q::i(), Q::j()]);
        assert!(matches!(err, Err(SpectraError::NotInSlice { index: 1, .. })));
    }

    #[test]
    fn single_precision_decomposition() {
        let f = SliceFrame::<f32>::standard();
        let a = QMatrix::<f32>::from_diag(&[Quaternion::j(), Quaternion::new(1.0, 0.0, 2.0, 0.0)]);
        let d = spectral_decompose(&a, &f).unwrap();
        assert!(d.residual < 1e-5);
    }
}
