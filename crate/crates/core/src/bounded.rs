//! Multiplication form `A = U*·M_φ·U` of a bounded normal operator, its
//! spherical spectrum, and the consequences read off the symbol.

use serde::{Deserialize, Serialize};

use crate::bridge::eigen::{sigma_min_with, sigma_max};
use crate::bridge::{chi_dense, eig_normal_complex, spectral_decompose, ComplexMatrix};
use crate::error::{Result, SpectraError};
use crate::measure::{ess_ran, ess_sup, AtomicMeasureSpace, Symbol};
use crate::qoperator::QMatrix;
use crate::quaternion::{Quaternion, SimilarityOrbit, SliceFrame};
use crate::scalar::Real;
use crate::slice::SliceStructure;

pub const REPORT_SCHEMA: &str = "qspectra-report-v1";

#[derive(Clone, Debug)]
pub struct MultiplicationForm<T> {
    pub source: QMatrix<T>,
    /// `U = V*`; its rows are the conjugated eigenvector basis.
    pub u: QMatrix<T>,
    /// Counting measure on `1, …, n`.
    pub space: AtomicMeasureSpace<T>,
    pub phi: Symbol<T>,
    pub frame: SliceFrame<T>,
    /// `‖A − U*·M_φ·U‖_F`.
    pub residual: T,
    pub op_norm: T,
    /// `|‖A‖ − ess sup |φ||`.
    pub norm_error: T,
}

impl<T: Real> MultiplicationForm<T> {
    /// `U*·M_φ·U`.
    pub fn reconstruct(&self) -> QMatrix<T> {
        &(&self.u.adjoint() * &self.phi.diag()) * &self.u
    }
}

fn check<T: Real>(name: &str, residual: T, tol: T) -> Result<()> {
    if residual <= tol {
        Ok(())
    } else {
        Err(SpectraError::InvariantViolated {
            name: name.into(),
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Restricts to a slice subspace, diagonalizes there and extends back:
/// `U = V*`, `φ_k = d_k ∈ C_m⁺` on counting measure.
pub fn multiplication_form<T: Real>(a: &QMatrix<T>, f: &SliceFrame<T>) -> Result<MultiplicationForm<T>> {
    let dec = spectral_decompose(a, f)?;
    let n = a.n();
    let space = AtomicMeasureSpace::counting(n)?;
    let phi = Symbol::new(space.clone(), dec.d.clone(), *f)?;
    let mut mf = MultiplicationForm {
        source: a.clone(),
        u: dec.v.adjoint(),
        space,
        phi,
        frame: *f,
        residual: T::zero(),
        op_norm: T::zero(),
        norm_error: T::zero(),
    };
    mf.residual = (a - &mf.reconstruct()).frobenius_norm();
    mf.op_norm = a.op_norm()?;
    mf.norm_error = (mf.op_norm - ess_sup(&mf.phi)).abs();
    let scale = a.frobenius_norm();
    // √ε-relative floor keeps f32 usable; for f64 the bound is 1e−9
    let rel = T::lit(1e-9).max(T::check_tol() * T::lit(10.0));
    check("reconstruction", mf.residual, rel * scale)?;
    check("norm identity", mf.norm_error, rel * mf.op_norm)?;
    Ok(mf)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct SphereSpectrum<T> {
    pub orbits: Vec<SimilarityOrbit<T>>,
}

impl<T: Real> SphereSpectrum<T> {
    /// Whether `q` lies on one of the orbit spheres to `tol` in `(re, |im|)`.
    pub fn contains(&self, q: &Quaternion<T>, tol: T) -> bool {
        self.orbits.iter().any(|o| o.contains(q, tol))
    }

    /// Chebyshev distance from `[q]` to the nearest orbit.
    pub fn distance(&self, q: &Quaternion<T>) -> T {
        let o = SimilarityOrbit::of(q);
        self.orbits.iter().map(|p| p.distance(&o)).fold(T::infinity(), T::min)
    }
}

/// `σ_S(A) = ⋃ [λ]` over the essential range of `φ`, deduplicated to 1e−9.
pub fn sphere_spectrum<T: Real>(mf: &MultiplicationForm<T>) -> SphereSpectrum<T> {
    let mut orbits: Vec<SimilarityOrbit<T>> = Vec::new();
    for v in ess_ran(&mf.phi) {
        let o = SimilarityOrbit::of(&v);
        if !orbits.iter().any(|p| p.distance(&o) <= T::lit(1e-9)) {
            orbits.push(o);
        }
    }
    SphereSpectrum { orbits }
}

/// Precomputed pieces for evaluating `Δ_q(A)` at many probes.
pub struct DeltaOracle<T> {
    chi_a: ComplexMatrix<T>,
    chi_a2: ComplexMatrix<T>,
    norm: T,
}

impl<T: Real> DeltaOracle<T> {
    pub fn new(a: &QMatrix<T>) -> Result<Self> {
        let f = SliceFrame::standard();
        let chi_a = chi_dense(a, &f);
        let norm = sigma_max(&chi_a)?;
        Ok(Self {
            chi_a2: &chi_a * &chi_a,
            chi_a,
            norm,
        })
    }

    /// `σ_min(Δ_q(A))`, from `χ(A²) − 2re(q)·χ(A) + |q|²·I`.
    pub fn sigma_min(&self, q: &Quaternion<T>) -> T {
        let n = self.chi_a.rows();
        let two_re = T::two() * q.re();
        let q2 = q.norm_sqr();
        let delta = ComplexMatrix::from_fn(n, n, |i, j| {
            let mut z = self.chi_a2[(i, j)] - self.chi_a[(i, j)] * two_re;
            if i == j {
                z.re += q2;
            }
            z
        });
        sigma_min_with(&delta, T::lit(1e-6), 500)
    }

    /// The membership threshold `tol·(‖A‖ + |q|)²`.
    pub fn threshold(&self, q: &Quaternion<T>, tol: T) -> T {
        let s = self.norm + q.norm();
        tol * s * s
    }

    pub fn in_spectrum(&self, q: &Quaternion<T>, tol: T) -> bool {
        self.sigma_min(q) <= self.threshold(q, tol)
    }
}

/// `q ∈ σ_S(A)` iff `σ_min(Δ_q(A)) ≤ tol·(‖A‖ + |q|)²`.
pub fn delta_oracle<T: Real>(a: &QMatrix<T>, probes: &[Quaternion<T>], tol: T) -> Result<Vec<bool>> {
    let oracle = DeltaOracle::new(a)?;
    Ok(probes.iter().map(|q| oracle.in_spectrum(q, tol)).collect())
}

/// `count` points of a Fibonacci lattice on the sphere `[re + r·i]`.
pub fn fibonacci_probes<T: Real>(o: &SimilarityOrbit<T>, count: usize) -> Vec<Quaternion<T>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - (2 * k + 1) as f64 / count as f64;
            let rho = (1.0 - z * z).sqrt();
            let theta = golden * k as f64;
            Quaternion::new(
                o.re,
                o.im_norm * T::lit(rho * theta.cos()),
                o.im_norm * T::lit(rho * theta.sin()),
                o.im_norm * T::lit(z),
            )
        })
        .collect()
}

/// `count` probes off every orbit of `spectrum`, obtained by perturbing the
/// radius or the real part of `o` and then pushing each candidate outward until
/// it is at least `gap` away from all orbits.
pub fn off_sphere_probes<T: Real>(
    o: &SimilarityOrbit<T>,
    spectrum: &SphereSpectrum<T>,
    count: usize,
    gap: T,
) -> Vec<Quaternion<T>> {
    let lattice = fibonacci_probes(&SimilarityOrbit { re: T::zero(), im_norm: T::one() }, count);
    (0..count)
        .map(|k| {
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            let mut step = gap * T::lit(1.0 + (k / 4) as f64);
            loop {
                let shifted = if (k / 2) % 2 == 0 {
                    SimilarityOrbit { re: o.re + sign * step, im_norm: o.im_norm }
                } else {
                    SimilarityOrbit { re: o.re, im_norm: (o.im_norm + sign * step).abs() }
                };
                let dir = lattice[k];
                let q = Quaternion::new(
                    shifted.re,
                    dir.x * shifted.im_norm,
                    dir.y * shifted.im_norm,
                    dir.z * shifted.im_norm,
                );
                if spectrum.distance(&q) >= gap {
                    return q;
                }
                step = step * T::lit(1.5);
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    pub anti_self_adjoint: bool,
    pub unitary: bool,
    /// Same tests on the operator: `‖(A + A*)/2‖ ≤ tol` and `‖A*A − I‖ ≤ tol·(2 + tol)`.
    pub operator_anti_self_adjoint: bool,
    pub operator_unitary: bool,
}

impl Classification {
    pub fn consistent(&self) -> bool {
        self.anti_self_adjoint == self.operator_anti_self_adjoint && self.unitary == self.operator_unitary
    }
}

pub fn classify<T: Real>(mf: &MultiplicationForm<T>, tol: T) -> Result<Classification> {
    let asa = mf.phi.essential_values().all(|p| p.re().abs() <= tol);
    let uni = mf.phi.essential_values().all(|p| (p.norm() - T::one()).abs() <= tol);
    let a = &mf.source;
    let n = a.n();
    let herm = (a + &a.adjoint()).scale_real(T::half());
    let defect = &(&a.adjoint() * a) - &QMatrix::identity(n);
    Ok(Classification {
        anti_self_adjoint: asa,
        unitary: uni,
        operator_anti_self_adjoint: herm.op_norm()? <= tol,
        operator_unitary: defect.op_norm()? <= tol * (T::two() + tol),
    })
}

/// `W = U*·M_ρ·U` with `ρ_k = φ_k·n/|φ_k|`, a unitary with `A = W*·A*·W`.
pub fn conjugate_equivalence<T: Real>(mf: &MultiplicationForm<T>) -> Result<QMatrix<T>> {
    let floor = T::slice_tol() * mf.op_norm.max(T::one());
    let n = mf.frame.n();
    let rho = mf
        .phi
        .values()
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let r = p.norm();
            if r <= floor {
                Err(SpectraError::ZeroSymbol { index: k })
            } else {
                Ok((*p * n).scale(r.recip()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(&(&mf.u.adjoint() * &QMatrix::from_diag(&rho)) * &mf.u)
}

#[derive(Clone, Debug)]
pub struct SliceSpectrumReport<T> {
    /// Eigenvalues of `A|H₊`.
    pub plus: Vec<Quaternion<T>>,
    /// Eigenvalues of `A|H₋`.
    pub minus: Vec<Quaternion<T>>,
    /// `cm_plus_rep` of every orbit of `σ_S(A)`.
    pub expected: Vec<Quaternion<T>>,
    /// Hausdorff distance between `plus` and `expected`.
    pub plus_error: T,
    /// Matching distance between `minus` and `conj(plus)`.
    pub conjugate_error: T,
}

fn hausdorff<T: Real>(a: &[Quaternion<T>], b: &[Quaternion<T>]) -> T {
    let one = |x: &[Quaternion<T>], y: &[Quaternion<T>]| {
        x.iter()
            .map(|p| y.iter().map(|q| p.dist(q)).fold(T::infinity(), T::min))
            .fold(T::zero(), T::max)
    };
    one(a, b).max(one(b, a))
}

/// Greedy bipartite matching distance between equal-length multisets.
pub fn matching_distance<T: Real>(a: &[Quaternion<T>], b: &[Quaternion<T>]) -> T {
    if a.len() != b.len() {
        return T::infinity();
    }
    let mut used = vec![false; b.len()];
    let mut worst = T::zero();
    for p in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, q)| (k, p.dist(q)))
            .fold((usize::MAX, T::infinity()), |acc, x| if x.1 < acc.1 { x } else { acc });
        if k == usize::MAX {
            return T::infinity();
        }
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// Compares `σ(A|H₊)` with `σ_S(A) ∩ C_m⁺` and `σ(A|H₋)` with its conjugate.
pub fn slice_spectrum_check<T: Real>(a: &QMatrix<T>, s: &SliceStructure<T>) -> Result<SliceSpectrumReport<T>> {
    let plus = eig_normal_complex(&s.restrict_plus(a)?)?.values;
    let minus = eig_normal_complex(&s.restrict_minus(a)?)?.values;
    let mf = multiplication_form(a, &s.frame)?;
    let expected: Vec<_> = sphere_spectrum(&mf)
        .orbits
        .iter()
        .map(|o| o.cm_plus_rep(&s.frame))
        .collect();
    let conj_plus: Vec<_> = plus.iter().map(Quaternion::conj).collect();
    Ok(SliceSpectrumReport {
        plus_error: hausdorff(&plus, &expected),
        conjugate_error: matching_distance(&minus, &conj_plus),
        plus,
        minus,
        expected,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NormCheck {
    pub op_norm: f64,
    pub ess_sup: f64,
    pub error: f64,
    pub tol: f64,
    pub pass: bool,
}

/// The decomposition report `{"phi", "orbits", "residual", "normCheck"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DecompositionReport {
    pub schema: String,
    pub phi: Vec<Quaternion<f64>>,
    pub orbits: Vec<SimilarityOrbit<f64>>,
    pub residual: f64,
    pub norm_check: NormCheck,
}

impl DecompositionReport {
    pub fn new<T: Real>(mf: &MultiplicationForm<T>) -> Self {
        let tol = 1e-9 * mf.op_norm.to_f64().unwrap_or(f64::NAN);
        let error = mf.norm_error.to_f64().unwrap_or(f64::NAN);
        Self {
            schema: REPORT_SCHEMA.into(),
            phi: mf.phi.values().iter().map(Quaternion::cast).collect(),
            orbits: sphere_spectrum(mf)
                .orbits
                .iter()
                .map(|o| SimilarityOrbit {
                    re: o.re.to_f64().unwrap_or(f64::NAN),
                    im_norm: o.im_norm.to_f64().unwrap_or(f64::NAN),
                })
                .collect(),
            residual: mf.residual.to_f64().unwrap_or(f64::NAN),
            norm_check: NormCheck {
                op_norm: mf.op_norm.to_f64().unwrap_or(f64::NAN),
                ess_sup: ess_sup(&mf.phi).to_f64().unwrap_or(f64::NAN),
                error,
                tol,
                pass: error <= tol,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Gen;
    use crate::slice::build_j;

    type Q = Quaternion<f64>;
    type M = QMatrix<f64>;

    fn f() -> SliceFrame<f64> {
        SliceFrame::standard()
    }

    fn s2() -> f64 {
        std::f64::consts::FRAC_1_SQRT_2
    }

    #[test]
    fn multiplication_form_examples() {
        let mf = multiplication_form(&M::from_diag(&[Q::j()]), &f()).unwrap();
        assert!(mf.phi.values()[0].dist(&Q::i()) < 1e-14);
        assert!(mf.u[(0, 0)].dist(&Q::new(s2(), 0.0, 0.0, -s2())) < 1e-14);

        let mf = multiplication_form(&M::from_diag(&[Q::new(1.0, 2.0, 0.0, 0.0), Q::new(0.0, -1.0, 0.0, 0.0)]), &f()).unwrap();
        // the second basis vector is flipped by n, so φ stays in C_i⁺
        assert!(mf.phi.values()[0].dist(&Q::new(1.0, 2.0, 0.0, 0.0)) < 1e-14);
        assert!(mf.phi.values()[1].dist(&Q::i()) < 1e-14);
        assert!(mf.residual < 1e-14);

        let mf = multiplication_form(&M::zeros(3, 3), &f()).unwrap();
        assert!(mf.phi.values().iter().all(|p| *p == Q::zero()));

        let shift = M::from_fn(2, 2, |i, j| if j == i + 1 { Q::one() } else { Q::zero() });
        assert!(matches!(multiplication_form(&shift, &f()), Err(SpectraError::NotNormal { .. })));
    }

    #[test]
    fn sphere_spectrum_examples() {
        let sp = sphere_spectrum(&multiplication_form(&M::from_diag(&[Q::j()]), &f()).unwrap());
        assert_eq!(sp.orbits.len(), 1);
        assert!(sp.orbits[0].distance(&SimilarityOrbit { re: 0.0, im_norm: 1.0 }) < 1e-14);

        let sp = sphere_spectrum(&multiplication_form(&M::from_diag(&[Q::one(), Q::from_real(2.0)]), &f()).unwrap());
        let mut got: Vec<_> = sp.orbits.iter().map(|o| (o.re, o.im_norm)).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, vec![(1.0, 0.0), (2.0, 0.0)]);

        let a = M::from_diag(&[Q::i(), Q::new(2.0, 3.0, 0.0, 0.0), Q::i()]);
        let sp = sphere_spectrum(&multiplication_form(&a, &f()).unwrap());
        assert_eq!(sp.orbits.len(), 2);
        assert!(sp.contains(&Q::new(2.0, 0.0, 3.0, 0.0), 1e-12));
        assert!(sp.contains(&Q::k(), 1e-12));
    }

    #[test]
    fn delta_oracle_examples() {
        let a = M::from_diag(&[Q::j()]);
        let probes = [Q::i(), Q::i().scale(2.0), Q::new(0.0, s2(), s2(), 0.0)];
        assert_eq!(delta_oracle(&a, &probes, 1e-7).unwrap(), vec![true, false, true]);
        let oracle = DeltaOracle::new(&a).unwrap();
        assert!((oracle.sigma_min(&Q::i().scale(2.0)) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn probes_are_placed_as_described() {
        let o = SimilarityOrbit { re: 0.5, im_norm: 2.0 };
        let on = fibonacci_probes(&o, 16);
        assert_eq!(on.len(), 16);
        assert!(on.iter().all(|q| o.contains(q, 1e-14)));
        let sp = SphereSpectrum { orbits: vec![o, SimilarityOrbit { re: 0.51, im_norm: 2.0 }] };
        let off = off_sphere_probes(&o, &sp, 16, 0.05);
        assert!(off.iter().all(|q| sp.distance(q) >= 0.05));
    }

    #[test]
    fn classify_examples() {
        let c = classify(&multiplication_form(&M::from_diag(&[Q::j()]), &f()).unwrap(), 1e-9).unwrap();
        assert!(c.anti_self_adjoint && c.unitary && c.consistent());
        let c = classify(&multiplication_form(&M::from_diag(&[Q::one(), Q::i()]), &f()).unwrap(), 1e-9).unwrap();
        assert!(!c.anti_self_adjoint && c.unitary && c.consistent());
        let c = classify(&multiplication_form(&M::scalar(2, Q::from_real(2.0)), &f()).unwrap(), 1e-9).unwrap();
        assert!(!c.anti_self_adjoint && !c.unitary && c.consistent());

        let mut g = Gen::<f64>::new(21);
        for n in [2, 5, 8] {
            let c = classify(&multiplication_form(&g.anti_self_adjoint(n), &f()).unwrap(), 1e-9).unwrap();
            assert!(c.anti_self_adjoint && c.consistent());
            let c = classify(&multiplication_form(&g.unitary_normal(n), &f()).unwrap(), 1e-9).unwrap();
            assert!(c.unitary && c.consistent());
            let c = classify(&multiplication_form(&g.normal(n), &f()).unwrap(), 1e-9).unwrap();
            assert!(c.consistent());
        }
    }

    #[test]
    fn conjugate_equivalence_examples() {
        let a = M::from_diag(&[Q::j()]);
        let mf = multiplication_form(&a, &f()).unwrap();
        let w = conjugate_equivalence(&mf).unwrap();
        let back = &(&w.adjoint() * &a.adjoint()) * &w;
        assert!((&back - &a).frobenius_norm() < 1e-14);
        assert!((&(&w.adjoint() * &w) - &M::identity(1)).frobenius_norm() < 1e-14);

        let a = M::from_diag(&[Q::i(), Q::i().scale(2.0)]);
        let mf = multiplication_form(&a, &f()).unwrap();
        let w = conjugate_equivalence(&mf).unwrap();
        assert!((&w - &M::scalar(2, Q::k())).frobenius_norm() < 1e-14);

        let a = M::from_diag(&[Q::from_real(3.0), Q::from_real(-1.0)]);
        let w = conjugate_equivalence(&multiplication_form(&a, &f()).unwrap()).unwrap();
        assert!((&(&(&w.adjoint() * &a) * &w) - &a).frobenius_norm() < 1e-14);

        let a = M::from_diag(&[Q::zero(), Q::one()]);
        assert!(matches!(
            conjugate_equivalence(&multiplication_form(&a, &f()).unwrap()),
            Err(SpectraError::ZeroSymbol { .. })
        ));
    }

    #[test]
    fn slice_spectrum_examples() {
        let a = M::from_diag(&[Q::j()]);
        let s = build_j(&spectral_decompose(&a, &f()).unwrap()).unwrap();
        let r = slice_spectrum_check(&a, &s).unwrap();
        assert!(r.plus[0].dist(&Q::i()) < 1e-14);
        assert!(r.plus_error < 1e-14 && r.conjugate_error < 1e-14);

        let a = M::from_diag(&[Q::from_real(2.0), Q::from_real(3.0)]);
        let s = SliceStructure::standard(2, &f());
        let r = slice_spectrum_check(&a, &s).unwrap();
        assert!(hausdorff(&r.plus, &[Q::from_real(2.0), Q::from_real(3.0)]) < 1e-14);
        assert!(hausdorff(&r.minus, &[Q::from_real(2.0), Q::from_real(3.0)]) < 1e-14);

        let a = M::from_diag(&[Q::new(1.0, 2.0, 0.0, 0.0)]);
        let s = SliceStructure::standard(1, &f());
        let r = slice_spectrum_check(&a, &s).unwrap();
        assert!(r.plus[0].dist(&Q::new(1.0, 2.0, 0.0, 0.0)) < 1e-14);
        assert!(r.minus[0].dist(&Q::new(1.0, -2.0, 0.0, 0.0)) < 1e-14);

        let s = SliceStructure::standard(1, &f());
        assert!(matches!(slice_spectrum_check(&M::from_diag(&[Q::j()]), &s), Err(SpectraError::NotCommuting { .. })));
    }

    #[test]
    fn random_normal_invariants() {
        let mut g = Gen::<f64>::new(22);
        for n in [1, 3, 6, 10] {
            let (a, d) = g.normal_with_known_spectrum(n);
            let mf = multiplication_form(&a, &f()).unwrap();
            assert!(mf.residual <= 1e-9 * a.frobenius_norm());
            assert!(mf.norm_error <= 1e-9 * mf.op_norm);
            assert!(matching_distance(mf.phi.values(), &d) < 1e-8);

            let sp = sphere_spectrum(&mf);
            let oracle = DeltaOracle::new(&a).unwrap();
            for o in &sp.orbits {
                assert!(fibonacci_probes(o, 16).iter().all(|q| oracle.in_spectrum(q, 1e-7)));
                let gap = 2e-3 * (mf.op_norm + o.re.abs() + o.im_norm);
                assert!(off_sphere_probes(o, &sp, 16, gap).iter().all(|q| !oracle.in_spectrum(q, 1e-7)));
            }

            let w = conjugate_equivalence(&mf).unwrap();
            assert!((&(&w.adjoint() * &w) - &M::identity(n)).frobenius_norm() < 1e-12);
            assert!((&(&(&w.adjoint() * &a.adjoint()) * &w) - &a).frobenius_norm() <= 1e-9 * a.frobenius_norm());
        }
    }

    #[test]
    fn report_layout() {
        let mf = multiplication_form(&M::from_diag(&[Q::j()]), &f()).unwrap();
        let v = serde_json::to_value(DecompositionReport::new(&mf)).unwrap();
        assert_eq!(v["schema"], REPORT_SCHEMA);
        assert_eq!(v["orbits"][0][1].as_f64().unwrap().round(), 1.0);
        assert!(v["normCheck"]["pass"].as_bool().unwrap());
        assert_eq!(v["phi"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn works_in_f32() {
        let a = QMatrix::<f32>::from_diag(&[Quaternion::j(), Quaternion::from_real(2.0)]);
        let mf = multiplication_form(&a, &SliceFrame::standard()).unwrap();
        assert!(mf.residual < 1e-5);
    }
}
