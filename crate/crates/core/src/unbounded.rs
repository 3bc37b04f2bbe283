//! The bounded transform `Z_T = T(I + T*T)^{−1/2}`, its inverse, and the
//! multiplication form of operators with unbounded symbols.
//!
//! Unboundedness is emulated on finite truncations: a symbol `ψ` of arbitrary
//! finite size on `N` atoms, mapped into the unit ball by `ξ⁻¹` and back.

use crate::bridge::eigen::hermitian_function;
use crate::bridge::{chi_dense, spectral_decompose, unchi_dense, CMatrix};
use crate::error::{Result, SpectraError};
use crate::measure::{pushforward_indexed, xi, xi_inverse, AtomicMeasureSpace, L2Element, MeasureFile, Symbol};
use crate::qoperator::QMatrix;
use crate::quaternion::{Quaternion, SliceFrame};
use crate::scalar::Real;
use crate::slice::{build_j, SliceStructure};

#[derive(Clone, Debug)]
pub struct BoundedTransform<T> {
    pub z: QMatrix<T>,
    pub source: QMatrix<T>,
    /// `‖S²(I + A*A) − I‖_F` for the computed `S = (I + A*A)^{−1/2}`.
    pub residual: T,
    pub norm: T,
}

fn self_adjoint_function<T: Real>(h: &QMatrix<T>, f: impl Fn(T) -> T) -> Result<QMatrix<T>> {
    let fr = SliceFrame::standard();
    let c = chi_dense(h, &fr);
    // symmetrize so the eigensolver sees an exactly Hermitian matrix
    let c = (&c + &c.adjoint()).scale(num_complex::Complex::new(T::half(), T::zero()));
    Ok(unchi_dense(&hermitian_function(&c, f)?, &fr))
}

/// `Z = A·(I + A*A)^{−1/2}`, the square root taken spectrally.
pub fn bounded_transform<T: Real>(a: &QMatrix<T>) -> Result<BoundedTransform<T>> {
    if !a.is_square() {
        return Err(SpectraError::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let n = a.n();
    let h = &a.adjoint() * a;
    let s = self_adjoint_function(&h, |x| (T::one() + x.max(T::zero())).sqrt().recip())?;
    let id = QMatrix::identity(n);
    let residual = (&(&(&s * &s) * &(&id + &h)) - &id).frobenius_norm();
    let z = a * &s;
    let norm = z.op_norm()?;
    let slack = T::check_tol();
    if !(norm <= T::one() + slack) {
        return Err(SpectraError::InvariantViolated {
            name: "||Z|| <= 1".into(),
            residual: norm.to_f64().unwrap_or(f64::NAN),
            tol: 1.0,
        });
    }
    Ok(BoundedTransform {
        z,
        source: a.clone(),
        residual,
        norm,
    })
}

/// `A = Z·(I − Z*Z)^{−1/2}`; rejects `‖Z‖ ≥ 1 − 1e−8`.
pub fn inverse_transform<T: Real>(z: &QMatrix<T>) -> Result<QMatrix<T>> {
    if !z.is_square() {
        return Err(SpectraError::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", z.rows(), z.cols()),
        });
    }
    let norm = z.op_norm()?;
    if !(norm < T::one() - T::lit(1e-8)) {
        return Err(SpectraError::NotInvertible {
            norm: norm.to_f64().unwrap_or(f64::NAN),
        });
    }
    let g = &z.adjoint() * z;
    let s = self_adjoint_function(&g, |x| (T::one() - x.max(T::zero())).sqrt().recip())?;
    Ok(z * &s)
}

/// A slice structure commuting with a normal `A`, built from the spectral
/// decomposition of `Z_A` rather than of `A`.
pub fn commuting_j_unbounded<T: Real>(a: &QMatrix<T>, f: &SliceFrame<T>) -> Result<SliceStructure<T>> {
    let scale = a.frobenius_norm();
    let defect = a.normality_defect();
    if !(defect <= T::check_tol() * scale * scale) {
        return Err(SpectraError::NotNormal {
            commutator: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let z = bounded_transform(a)?.z;
    let s = build_j(&spectral_decompose(&z, f)?)?;
    let comm = s.j.commutator_norm(a);
    if !(comm <= T::lit(1e-9) * scale) {
        return Err(SpectraError::NotCommuting {
            commutator: comm.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(s)
}

/// `‖ext(Z_{T₊}) − Z_{ext(T₊)}‖_F`, with `Z_{T₊}` computed in the complex algebra.
pub fn z_extension_check<T: Real>(tplus: &CMatrix<T>, s: &SliceStructure<T>) -> Result<T> {
    let c = tplus.to_complex();
    let h = &c.adjoint() * &c;
    let h = (&h + &h.adjoint()).scale(num_complex::Complex::new(T::half(), T::zero()));
    let root = hermitian_function(&h, |x| (T::one() + x.max(T::zero())).sqrt().recip())?;
    let zplus = CMatrix::from_complex(*tplus.frame(), &(&c * &root));
    let via_plus = s.extend(&zplus)?;
    let via_ext = bounded_transform(&s.extend(tplus)?)?.z;
    Ok((&via_plus - &via_ext).frobenius_norm())
}

/// `M_ψ` on an `N`-atom truncation.
#[derive(Clone, Debug)]
pub struct UnboundedSim<T> {
    pub space: AtomicMeasureSpace<T>,
    pub psi: Symbol<T>,
    pub truncation: usize,
}

impl<T: Real> UnboundedSim<T> {
    pub fn new(psi: Symbol<T>) -> Self {
        Self {
            space: psi.space.clone(),
            truncation: psi.space.len(),
            psi,
        }
    }

    /// `ψ(t) = t·m` on `n` uniform atoms in `[0, r]`.
    pub fn linear(n: usize, r: T, f: &SliceFrame<T>) -> Result<Self> {
        let space = AtomicMeasureSpace::uniform_grid(n, T::zero(), r)?;
        let values = space.atoms().iter().map(|t| f.m().scale(t.w)).collect();
        Ok(Self::new(Symbol::new(space, values, *f)?))
    }

    pub fn from_file(file: &MeasureFile<T>, f: &SliceFrame<T>) -> Result<Self> {
        let psi = file
            .psi
            .clone()
            .ok_or_else(|| SpectraError::Parse("measure file has no \"psi\" array".into()))?;
        Ok(Self::new(Symbol::new(file.space()?, psi, *f)?))
    }
}

/// `M_ψ = V*·M_η·V` with `η(z) = z` on the image space.
#[derive(Clone, Debug)]
pub struct UnboundedForm<T> {
    /// Bounded symbol `φ = ξ⁻¹∘ψ`.
    pub phi: Symbol<T>,
    /// Pushforward of the source measure under `ξ∘φ`.
    pub space: AtomicMeasureSpace<T>,
    pub eta: Symbol<T>,
    /// `V` as an atom map: source atom `i` goes to image atom `perm[i]`.
    pub perm: Vec<usize>,
    /// Largest `‖M_ψ e_i − V*M_ηV e_i‖` over atom indicators.
    pub residual: T,
    /// Largest `|‖Vg‖ − ‖g‖|` over the same indicators.
    pub isometry_defect: T,
}

impl<T: Real> UnboundedForm<T> {
    /// `(Vg)(perm[i]) = g(i)`.
    pub fn apply_v(&self, g: &L2Element<T>) -> Result<L2Element<T>> {
        let mut out = vec![Quaternion::zero(); self.space.len()];
        for (i, v) in g.values().iter().enumerate() {
            out[self.perm[i]] = *v;
        }
        L2Element::new(self.space.clone(), out)
    }

    /// `(V*h)(i) = h(perm[i])`.
    pub fn apply_v_adjoint(&self, h: &L2Element<T>, source: &AtomicMeasureSpace<T>) -> Result<L2Element<T>> {
        L2Element::new(source.clone(), self.perm.iter().map(|&k| h.values()[k]).collect())
    }

    /// `V` as a matrix from source to image coordinates.
    pub fn v_matrix(&self) -> QMatrix<T> {
        QMatrix::from_fn(self.space.len(), self.perm.len(), |r, c| {
            if self.perm[c] == r {
                Quaternion::one()
            } else {
                Quaternion::zero()
            }
        })
    }
}

pub fn unbounded_multiplication_form<T: Real>(sim: &UnboundedSim<T>, f: &SliceFrame<T>) -> Result<UnboundedForm<T>> {
    let psi = Symbol::new(sim.space.clone(), sim.psi.values().to_vec(), *f)?;
    let phi = psi.map(xi_inverse)?;
    let images = phi
        .values()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            xi(p).ok_or(SpectraError::OutsideUnitDisc {
                index: i,
                modulus: p.norm().to_f64().unwrap_or(f64::NAN),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let push = pushforward_indexed(&sim.space, |i, _| images[i])?;
    for (i, &k) in push.index.iter().enumerate() {
        if let Some(first) = push.index[..i].iter().position(|&p| p == k) {
            return Err(SpectraError::NonInjective { first, second: i });
        }
    }
    let eta = Symbol::new(push.space.clone(), push.space.atoms().to_vec(), *f)?;
    let mut form = UnboundedForm {
        phi,
        space: push.space,
        eta,
        perm: push.index,
        residual: T::zero(),
        isometry_defect: T::zero(),
    };
    for i in 0..sim.space.len() {
        let mut e = vec![Quaternion::zero(); sim.space.len()];
        e[i] = Quaternion::one();
        let e = L2Element::new(sim.space.clone(), e)?;
        let ve = form.apply_v(&e)?;
        let back = form.apply_v_adjoint(&crate::measure::m_phi(&form.eta, &ve)?, &sim.space)?;
        let direct = crate::measure::m_phi(&psi, &e)?;
        let unweighted = back.values()[i].dist(&direct.values()[i]);
        form.residual = form.residual.max(unweighted);
        form.isometry_defect = form.isometry_defect.max((ve.norm() - e.norm()).abs());
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Gen;
    use crate::slice::SliceStructure;

    type Q = Quaternion<f64>;
    type M = QMatrix<f64>;

    fn f() -> SliceFrame<f64> {
        SliceFrame::standard()
    }

    #[test]
    fn transform_examples() {
        let bt = bounded_transform(&M::scalar(2, Q::from_real(3.0))).unwrap();
        assert!((&bt.z - &M::scalar(2, Q::from_real(3.0 / 10f64.sqrt()))).frobenius_norm() < 1e-14);
        assert!((bt.norm - 0.9486833).abs() < 1e-7);

        let bt = bounded_transform(&M::from_diag(&[Q::j()])).unwrap();
        assert!(bt.z[(0, 0)].dist(&Q::j().scale(std::f64::consts::FRAC_1_SQRT_2)) < 1e-14);
        assert!(bt.residual < 1e-14);

        assert_eq!(bounded_transform(&M::zeros(3, 3)).unwrap().z.frobenius_norm(), 0.0);
    }

    #[test]
    fn inverse_examples() {
        let t = inverse_transform(&M::scalar(1, Q::from_real(3.0 / 10f64.sqrt()))).unwrap();
        assert!((t[(0, 0)].w - 3.0).abs() < 1e-13);
        let t = inverse_transform(&M::from_diag(&[Q::j().scale(std::f64::consts::FRAC_1_SQRT_2)])).unwrap();
        assert!(t[(0, 0)].dist(&Q::j()) < 1e-14);
        assert!(matches!(inverse_transform(&M::from_diag(&[Q::k()])), Err(SpectraError::NotInvertible { .. })));
    }

    #[test]
    fn transform_invariants() {
        let mut g = Gen::<f64>::new(31);
        for (n, scale) in [(2, 1.0), (4, 30.0), (6, 1e3), (8, 0.01)] {
            let a = g.normal(n).scale_real(scale);
            let bt = bounded_transform(&a).unwrap();
            assert!(bt.norm <= 1.0);
            assert!(bt.z.is_normal(1e-10));
            let adj = bounded_transform(&a.adjoint()).unwrap();
            assert!((&bt.z.adjoint() - &adj.z).frobenius_norm() < 1e-10);
            let back = inverse_transform(&bt.z).unwrap();
            let an = a.op_norm().unwrap();
            assert!((&back - &a).frobenius_norm() <= 1e-8 * (1.0 + an * an));

            // non-normal input still transforms into the unit ball
            let b = g.matrix(n).scale_real(scale);
            assert!(bounded_transform(&b).unwrap().norm <= 1.0);
        }
    }

    #[test]
    fn commuting_j_examples() {
        let a = M::from_diag(&[Q::j()]);
        let s = commuting_j_unbounded(&a, &f()).unwrap();
        assert!(s.j[(0, 0)].dist(&Q::j()) < 1e-14);

        let a = M::from_diag(&[Q::from_real(1.0), Q::from_real(-2.0), Q::from_real(5.0)]);
        let s = commuting_j_unbounded(&a, &f()).unwrap();
        assert!((&s.j - &M::scalar(3, Q::i())).frobenius_norm() < 1e-14);

        let mut g = Gen::<f64>::new(32);
        let a = g.normal(7).scale_real(50.0);
        let s = commuting_j_unbounded(&a, &f()).unwrap();
        assert!(s.j.commutator_norm(&a) <= 1e-9 * a.frobenius_norm());

        let shift = M::from_fn(2, 2, |i, j| if j == i + 1 { Q::one() } else { Q::zero() });
        assert!(matches!(commuting_j_unbounded(&shift, &f()), Err(SpectraError::NotNormal { .. })));
    }

    #[test]
    fn z_extension_examples() {
        let s = SliceStructure::standard(1, &f());
        let t = CMatrix::new(f(), 1, 1, vec![Q::i()]).unwrap();
        assert!(z_extension_check(&t, &s).unwrap() < 1e-12);
        let zero = CMatrix::new(f(), 1, 1, vec![Q::zero()]).unwrap();
        assert_eq!(z_extension_check(&zero, &s).unwrap(), 0.0);

        let mut g = Gen::<f64>::new(33);
        let s = SliceStructure::from_unitary(&g.unitary(4), &f()).unwrap();
        let t = g.complex_normal(4, &f());
        assert!(z_extension_check(&t, &s).unwrap() < 1e-9);
    }

    #[test]
    fn unbounded_form_examples() {
        let sp = AtomicMeasureSpace::counting(2).unwrap();
        let psi = Symbol::new(sp, vec![Q::i(), Q::i().scale(2.0)], f()).unwrap();
        let form = unbounded_multiplication_form(&UnboundedSim::new(psi), &f()).unwrap();
        assert!(form.phi.values()[0].dist(&Q::i().scale(0.5f64.sqrt())) < 1e-15);
        assert!(form.phi.values()[1].dist(&Q::i().scale(2.0 / 5f64.sqrt())) < 1e-15);
        assert!(form.space.atoms()[0].dist(&Q::i()) < 1e-14);
        assert!(form.space.atoms()[1].dist(&Q::i().scale(2.0)) < 1e-14);
        assert_eq!(form.eta.values(), form.space.atoms());
        assert_eq!(form.perm, vec![0, 1]);
        assert_eq!(form.v_matrix(), M::identity(2));
        assert!(form.residual < 1e-14);

        let sp = AtomicMeasureSpace::counting(1).unwrap();
        let psi = Symbol::new(sp, vec![Q::zero()], f()).unwrap();
        let form = unbounded_multiplication_form(&UnboundedSim::new(psi), &f()).unwrap();
        assert_eq!(form.eta.values(), &[Q::zero()]);

        let sp = AtomicMeasureSpace::counting(2).unwrap();
        let psi = Symbol::new(sp, vec![Q::i(), Q::i()], f()).unwrap();
        assert!(matches!(
            unbounded_multiplication_form(&UnboundedSim::new(psi), &f()),
            Err(SpectraError::NonInjective { first: 0, second: 1 })
        ));
    }

    #[test]
    fn unbounded_form_from_decomposition() {
        let mut g = Gen::<f64>::new(34);
        let a = g.normal(6).scale_real(40.0);
        let dec = spectral_decompose(&a, &f()).unwrap();
        let sp = AtomicMeasureSpace::counting(6).unwrap();
        let sim = UnboundedSim::new(Symbol::new(sp, dec.d.clone(), f()).unwrap());
        let form = unbounded_multiplication_form(&sim, &f()).unwrap();
        let v = &form.v_matrix() * &dec.v.adjoint();
        let rebuilt = &(&v.adjoint() * &form.eta.diag()) * &v;
        assert!((&rebuilt - &a).frobenius_norm() <= 1e-9 * a.frobenius_norm());
    }

    #[test]
    fn truncation_stability() {
        let fr = SliceFrame::complete(crate::ImaginaryUnit::normalized(Q::new(0.0, 1.0, -1.0, -1.0)).unwrap());
        let r = 10.0;
        for n in [8, 64, 512] {
            let form = unbounded_multiplication_form(&UnboundedSim::linear(n, r, &fr).unwrap(), &fr).unwrap();
            assert!(form.residual <= 1e-12 * (1.0 + r * r), "n = {n}: {}", form.residual);
            assert!(form.isometry_defect < 1e-15);
            assert!((form.space.total_mass() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sim_reads_measure_files() {
        let file = MeasureFile::<f64>::from_json(
            r#"{"atoms": [[0,0,0,0],[1,0,0,0]], "weights": [1, 2], "psi": [[0,3,0,0],[1,0,0,0]]}"#,
        )
        .unwrap();
        let sim = UnboundedSim::from_file(&file, &f()).unwrap();
        assert_eq!(sim.truncation, 2);
        let form = unbounded_multiplication_form(&sim, &f()).unwrap();
        assert_eq!(form.space.weights(), &[1.0, 2.0]);
        let mut no_psi = file.clone();
        no_psi.psi = None;
        assert!(UnboundedSim::from_file(&no_psi, &f()).is_err());
    }
}
