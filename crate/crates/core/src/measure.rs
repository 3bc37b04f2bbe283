//! Finite atomic measure spaces and `L²(Ω; ℍ; μ)` over them.
//!
//! Weights live in the inner product, values are stored unweighted, so
//! multiplication operators act literally pointwise.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectraError};
use crate::qoperator::QMatrix;
use crate::quaternion::{Quaternion, SliceFrame};
use crate::scalar::Real;

/// Tolerance for identifying two atom labels or two symbol values.
pub fn merge_tol<T: Real>(q: &Quaternion<T>) -> T {
    T::lit(1e-12) * q.norm().max(T::one())
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasureSpace<T> {
    atoms: Vec<Quaternion<T>>,
    weights: Vec<T>,
}

impl<T: Real> AtomicMeasureSpace<T> {
    pub fn new(atoms: Vec<Quaternion<T>>, weights: Vec<T>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(SpectraError::LengthMismatch {
                left: atoms.len(),
                right: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < T::zero()) {
            return Err(SpectraError::InvalidMeasure(format!("weight {w} is negative or not finite")));
        }
        if !weights.iter().any(|w| *w > T::zero()) {
            return Err(SpectraError::InvalidMeasure("no atom has positive weight".into()));
        }
        Ok(Self { atoms, weights })
    }

    /// Counting measure on the labels `1, …, n`.
    pub fn counting(n: usize) -> Result<Self> {
        Self::new(
            (1..=n).map(|k| Quaternion::from_real(T::from_usize(k).unwrap())).collect(),
            vec![T::one(); n],
        )
    }

    /// `n` equally weighted atoms at `lo + (hi − lo)·k/(n − 1)`, total mass 1.
    pub fn uniform_grid(n: usize, lo: T, hi: T) -> Result<Self> {
        if n < 2 {
            return Err(SpectraError::InvalidMeasure(format!("grid needs at least 2 atoms, got {n}")));
        }
        let step = (hi - lo) / T::from_usize(n - 1).unwrap();
        let w = T::one() / T::from_usize(n).unwrap();
        Self::new(
            (0..n).map(|k| Quaternion::from_real(lo + step * T::from_usize(k).unwrap())).collect(),
            vec![w; n],
        )
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Quaternion<T>] {
        &self.atoms
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn total_mass(&self) -> T {
        self.weights.iter().copied().sum()
    }

    /// Indices of atoms with strictly positive weight.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.weights[i] > T::zero())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(SpectraError::SpaceMismatch)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct L2Element<T> {
    pub space: AtomicMeasureSpace<T>,
    values: Vec<Quaternion<T>>,
}

impl<T: Real> L2Element<T> {
    pub fn new(space: AtomicMeasureSpace<T>, values: Vec<Quaternion<T>>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(SpectraError::LengthMismatch {
                left: space.len(),
                right: values.len(),
            });
        }
        Ok(Self { space, values })
    }

    pub fn constant(space: AtomicMeasureSpace<T>, q: Quaternion<T>) -> Self {
        let values = vec![q; space.len()];
        Self { space, values }
    }

    pub fn values(&self) -> &[Quaternion<T>] {
        &self.values
    }

    pub fn norm_sqr(&self) -> T {
        self.values
            .iter()
            .zip(self.space.weights())
            .map(|(v, w)| *w * v.norm_sqr())
            .sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale_right(&self, q: Quaternion<T>) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(|v| *v * q).collect(),
        }
    }

    pub fn dist(&self, other: &Self) -> Result<T> {
        self.space.check_same(&other.space)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.space.weights())
            .map(|((a, b), w)| *w * (*a - *b).norm_sqr())
            .sum::<T>()
            .sqrt())
    }
}

/// A `C_m`-valued function on the atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol<T> {
    pub space: AtomicMeasureSpace<T>,
    pub frame: SliceFrame<T>,
    values: Vec<Quaternion<T>>,
}

impl<T: Real> Symbol<T> {
    pub fn new(space: AtomicMeasureSpace<T>, values: Vec<Quaternion<T>>, frame: SliceFrame<T>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(SpectraError::LengthMismatch {
                left: space.len(),
                right: values.len(),
            });
        }
        let values = values
            .iter()
            .enumerate()
            .map(|(i, q)| frame.project(q, merge_tol(q), i))
            .collect::<Result<_>>()?;
        Ok(Self { space, frame, values })
    }

    pub fn values(&self) -> &[Quaternion<T>] {
        &self.values
    }

    /// Values on positive-weight atoms.
    pub fn essential_values(&self) -> impl Iterator<Item = &Quaternion<T>> + '_ {
        self.space.support().map(move |i| &self.values[i])
    }

    /// `M_φ` on counting coordinates: `diag(φ)`. Only meaningful as the
    /// operator on `L²` when every weight is positive.
    pub fn diag(&self) -> QMatrix<T> {
        QMatrix::from_diag(&self.values)
    }

    pub fn map(&self, f: impl Fn(&Quaternion<T>) -> Quaternion<T>) -> Result<Self> {
        Self::new(self.space.clone(), self.values.iter().map(f).collect(), self.frame)
    }
}

/// `⟨f|g⟩ = Σ wᵢ·conj(fᵢ)·gᵢ`.
pub fn l2_inner<T: Real>(f: &L2Element<T>, g: &L2Element<T>) -> Result<Quaternion<T>> {
    f.space.check_same(&g.space)?;
    Ok(f.values
        .iter()
        .zip(&g.values)
        .zip(f.space.weights())
        .map(|((a, b), w)| (a.conj() * *b).scale(*w))
        .sum())
}

/// `(M_φ g)(x) = φ(x)·g(x)`.
pub fn m_phi<T: Real>(phi: &Symbol<T>, g: &L2Element<T>) -> Result<L2Element<T>> {
    phi.space.check_same(&g.space)?;
    Ok(L2Element {
        space: g.space.clone(),
        values: phi.values.iter().zip(&g.values).map(|(p, v)| *p * *v).collect(),
    })
}

/// `max |φᵢ|` over positive-weight atoms.
pub fn ess_sup<T: Real>(phi: &Symbol<T>) -> T {
    phi.essential_values().map(Quaternion::norm).fold(T::zero(), T::max)
}

/// Distinct values on positive-weight atoms, in order of first appearance.
pub fn ess_ran<T: Real>(phi: &Symbol<T>) -> Vec<Quaternion<T>> {
    let mut out: Vec<Quaternion<T>> = Vec::new();
    for v in phi.essential_values() {
        if !out.iter().any(|u| u.dist(v) <= merge_tol(v)) {
            out.push(*v);
        }
    }
    out
}

/// `‖M_φ‖`, computed as the largest of `‖M_φ eᵢ‖ / ‖eᵢ‖` over the indicator
/// functions `eᵢ` of positive-weight atoms; these diagonalize `M_φ`.
pub fn m_phi_norm<T: Real>(phi: &Symbol<T>) -> T {
    let sp = &phi.space;
    sp.support()
        .map(|i| {
            let mut e = vec![Quaternion::zero(); sp.len()];
            e[i] = Quaternion::one();
            let e = L2Element {
                space: sp.clone(),
                values: e,
            };
            let image = m_phi(phi, &e).expect("same space");
            image.norm() / e.norm()
        })
        .fold(T::zero(), T::max)
}

/// Pointwise `f = F₁ + F₂·n` with `F₁, F₂` valued in `C_m`.
pub fn l2_slice_split<T: Real>(f: &L2Element<T>, fr: &SliceFrame<T>) -> (L2Element<T>, L2Element<T>) {
    let (a, b) = f.values.iter().map(|q| fr.split(q)).unzip();
    (
        L2Element {
            space: f.space.clone(),
            values: a,
        },
        L2Element {
            space: f.space.clone(),
            values: b,
        },
    )
}

/// Image measure `ν(S) = μ(map⁻¹(S))` with its atom assignment.
#[derive(Clone, Debug)]
pub struct Pushforward<T> {
    pub space: AtomicMeasureSpace<T>,
    /// `index[i]` is the image atom of source atom `i`.
    pub index: Vec<usize>,
}

/// Merges images that agree to 1e−12 (relative to their size); image atoms
/// appear in order of first occurrence.
pub fn pushforward<T: Real>(
    sp: &AtomicMeasureSpace<T>,
    map: impl Fn(&Quaternion<T>) -> Quaternion<T>,
) -> Result<Pushforward<T>> {
    pushforward_indexed(sp, |_, a| map(a))
}

/// [`pushforward`] for maps given per atom index rather than per label.
pub fn pushforward_indexed<T: Real>(
    sp: &AtomicMeasureSpace<T>,
    map: impl Fn(usize, &Quaternion<T>) -> Quaternion<T>,
) -> Result<Pushforward<T>> {
    let mut atoms: Vec<Quaternion<T>> = Vec::new();
    let mut weights: Vec<T> = Vec::new();
    let mut index = Vec::with_capacity(sp.len());
    for (i, (a, w)) in sp.atoms.iter().zip(&sp.weights).enumerate() {
        let image = map(i, a);
        match atoms.iter().position(|b| b.dist(&image) <= merge_tol(&image)) {
            Some(k) => {
                weights[k] += *w;
                index.push(k);
            }
            None => {
                atoms.push(image);
                weights.push(*w);
                index.push(atoms.len() - 1);
            }
        }
    }
    Ok(Pushforward {
        space: AtomicMeasureSpace::new(atoms, weights)?,
        index,
    })
}

/// `ξ(p) = p·(1 − |p|²)^{−1/2}` on the open unit ball; `None` outside it.
pub fn xi<T: Real>(p: &Quaternion<T>) -> Option<Quaternion<T>> {
    let r = p.norm();
    if !(r < T::one()) {
        return None;
    }
    // (1 − r)(1 + r) loses less than 1 − r² near the boundary
    Some(p.scale(((T::one() - r) * (T::one() + r)).sqrt().recip()))
}

/// `ξ⁻¹(p) = p·(1 + |p|²)^{−1/2}`, mapping all of ℍ into the unit ball.
pub fn xi_inverse<T: Real>(p: &Quaternion<T>) -> Quaternion<T> {
    p.scale(T::one().hypot(p.norm()).recip())
}

/// On-disk layout: `{"atoms": [[w,x,y,z]...], "weights": [...]}` with optional
/// parallel symbol arrays `"phi"` and `"psi"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct MeasureFile<T> {
    pub atoms: Vec<Quaternion<T>>,
    pub weights: Vec<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Quaternion<T>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<Quaternion<T>>>,
}

impl<T: Real + Serialize + for<'de> Deserialize<'de>> MeasureFile<T> {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

impl<T: Real> MeasureFile<T> {
    pub fn space(&self) -> Result<AtomicMeasureSpace<T>> {
        AtomicMeasureSpace::new(self.atoms.clone(), self.weights.clone())
    }

    pub fn from_space(sp: &AtomicMeasureSpace<T>) -> Self {
        Self {
            atoms: sp.atoms.clone(),
            weights: sp.weights.clone(),
            phi: None,
            psi: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Gen;
    use proptest::prelude::*;

    type Q = Quaternion<f64>;

    fn f() -> SliceFrame<f64> {
        SliceFrame::standard()
    }

    fn space(w: &[f64]) -> AtomicMeasureSpace<f64> {
        AtomicMeasureSpace::new((0..w.len()).map(|k| Q::from_real(k as f64)).collect(), w.to_vec()).unwrap()
    }

    #[test]
    fn measure_space_validation() {
        assert!(AtomicMeasureSpace::<f64>::new(vec![Q::zero()], vec![0.0]).is_err());
        assert!(AtomicMeasureSpace::<f64>::new(vec![Q::zero()], vec![-1.0]).is_err());
        assert!(AtomicMeasureSpace::<f64>::new(vec![Q::zero()], vec![f64::NAN]).is_err());
        assert!(AtomicMeasureSpace::<f64>::new(vec![Q::zero()], vec![1.0, 2.0]).is_err());
        let g = AtomicMeasureSpace::<f64>::uniform_grid(64, 0.0, 1.0).unwrap();
        assert_eq!(g.atoms()[63], Q::one());
        assert!((g.total_mass() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn inner_examples() {
        let sp = space(&[1.0, 2.0]);
        let fv = L2Element::constant(sp.clone(), Q::one());
        let g = L2Element::new(sp.clone(), vec![Q::i(), Q::j()]).unwrap();
        assert_eq!(l2_inner(&fv, &g).unwrap(), Q::i() + Q::j().scale(2.0));

        let sp0 = space(&[1.0, 0.0]);
        let a = L2Element::new(sp0.clone(), vec![Q::one(), Q::k()]).unwrap();
        let b = L2Element::new(sp0.clone(), vec![Q::one(), Q::j()]).unwrap();
        assert_eq!(l2_inner(&a, &b).unwrap(), Q::one());
        assert!(matches!(l2_inner(&fv, &a), Err(SpectraError::SpaceMismatch)));
    }

    #[test]
    fn m_phi_examples() {
        let sp = space(&[1.0, 1.0]);
        let phi = Symbol::new(sp.clone(), vec![Q::i(), Q::i().scale(2.0)], f()).unwrap();
        let g = L2Element::constant(sp.clone(), Q::j());
        assert_eq!(m_phi(&phi, &g).unwrap().values(), &[Q::k(), Q::k().scale(2.0)]);
        assert_eq!(m_phi_norm(&phi), 2.0);

        let one = Symbol::new(sp.clone(), vec![Q::one(); 2], f()).unwrap();
        assert_eq!(m_phi(&one, &g).unwrap(), g);
        assert!(Symbol::new(sp, vec![Q::j(), Q::one()], f()).is_err());
    }

    #[test]
    fn ess_examples() {
        let sp = space(&[1.0, 1.0, 0.0]);
        let phi = Symbol::new(sp, vec![Q::i(), Q::i().scale(2.0), Q::i().scale(5.0)], f()).unwrap();
        assert_eq!(ess_sup(&phi), 2.0);
        assert_eq!(ess_ran(&phi), vec![Q::i(), Q::i().scale(2.0)]);
        assert_eq!(m_phi_norm(&phi), 2.0);

        let c = Q::new(1.0, 2.0, 0.0, 0.0);
        let phi = Symbol::new(space(&[1.0, 3.0, 2.0]), vec![c; 3], f()).unwrap();
        assert_eq!(ess_sup(&phi), c.norm());
        assert_eq!(ess_ran(&phi), vec![c]);
    }

    #[test]
    fn grid_symbol_norm() {
        let v = Q::new(0.0, 1.0, -1.0, -1.0);
        let fr = crate::SliceFrame::complete(crate::ImaginaryUnit::normalized(v).unwrap());
        for n in [2, 17, 64] {
            let sp = AtomicMeasureSpace::uniform_grid(n, 0.0, 1.0).unwrap();
            let phi = Symbol::new(sp.clone(), sp.atoms().iter().map(|t| v.scale(t.w)).collect(), fr).unwrap();
            assert!((ess_sup(&phi) - 3f64.sqrt()).abs() < 1e-15);
            assert!((m_phi_norm(&phi) - 1.7320508).abs() < 1e-7);
        }
    }

    #[test]
    fn slice_split_examples() {
        let sp = space(&[1.0, 0.5]);
        let (a, b) = l2_slice_split(&L2Element::constant(sp.clone(), Q::new(1.0, 2.0, 3.0, 4.0)), &f());
        assert_eq!(a.values(), &[Q::new(1.0, 2.0, 0.0, 0.0); 2]);
        assert_eq!(b.values(), &[Q::new(3.0, 4.0, 0.0, 0.0); 2]);

        let g = L2Element::new(sp.clone(), vec![Q::new(1.0, -1.0, 0.0, 0.0), Q::new(0.5, 2.0, 0.0, 0.0)]).unwrap();
        let (a, b) = l2_slice_split(&g, &f());
        assert_eq!(a, g);
        assert_eq!(b.norm(), 0.0);
        let (a, b) = l2_slice_split(&g.scale_right(Q::j()), &f());
        assert_eq!(a.norm(), 0.0);
        assert_eq!(b, g);
    }

    #[test]
    fn pushforward_examples() {
        let sp = space(&[1.0, 2.0]);
        let c = Q::from_real(7.0);
        let p = pushforward(&sp, |_| c).unwrap();
        assert_eq!(p.space.atoms(), &[c]);
        assert_eq!(p.space.weights(), &[3.0]);
        assert_eq!(p.index, vec![0, 0]);

        let p = pushforward(&sp, |a| *a).unwrap();
        assert_eq!(p.space, sp);

        let sp = AtomicMeasureSpace::new(vec![Q::i().scale(0.6)], vec![2.0]).unwrap();
        let p = pushforward(&sp, |a| xi(a).unwrap()).unwrap();
        assert!(p.space.atoms()[0].dist(&Q::i().scale(0.75)) < 1e-15);
        assert_eq!(p.space.weights(), &[2.0]);
    }

    #[test]
    fn xi_round_trip() {
        let mut g = Gen::<f64>::new(1);
        assert!(xi(&Q::i()).is_none());
        for _ in 0..200 {
            let dir = g.slice_value(&f()).normalize().unwrap();
            let r = 10f64.powf(g.real_in(-6.0, 6.0));
            let p = dir.scale(r);
            let back = xi_inverse(&xi(&xi_inverse(&p)).unwrap());
            // ξ⁻¹ ∘ ξ is exact up to rounding on the ball
            assert!(back.dist(&xi_inverse(&p)) < 1e-12);
            // ξ ∘ ξ⁻¹ loses about eps·|p|² relatively: ξ⁻¹(p) is only known to eps
            let there = xi(&xi_inverse(&p)).unwrap();
            let tol = 1e-12 * r.max(1.0) + 4.0 * f64::EPSILON * r.powi(3);
            assert!(there.dist(&p) <= tol, "r = {r}: {}", there.dist(&p));
        }
    }

    #[test]
    fn json_round_trip() {
        let file = MeasureFile {
            atoms: vec![Q::i(), Q::new(0.5, 0.25, 0.0, 0.0)],
            weights: vec![1.0, 0.5],
            phi: Some(vec![Q::i(), Q::zero()]),
            psi: None,
        };
        let s = file.to_json().unwrap();
        assert!(!s.contains("psi"));
        let back = MeasureFile::<f64>::from_json(&s).unwrap();
        assert_eq!(back.atoms, file.atoms);
        assert_eq!(back.phi, file.phi);
        assert!(MeasureFile::<f64>::from_json("{\"atoms\": [[1,2]], \"weights\": [1]}").is_err());
    }

    proptest! {
        #[test]
        fn norm_and_normality_invariants(seed in any::<u64>(), n in 1usize..12) {
            let mut g = Gen::<f64>::new(seed);
            let weights: Vec<f64> = (0..n).map(|k| if k == 0 { 1.0 } else { g.real_in(0.0, 2.0) }).collect();
            let sp = space(&weights);
            let phi = Symbol::new(sp.clone(), (0..n).map(|_| g.slice_value(&f())).collect(), f()).unwrap();
            prop_assert!((m_phi_norm(&phi) - ess_sup(&phi)).abs() <= 1e-12 * ess_sup(&phi).max(1.0));

            let d = phi.diag();
            prop_assert!(d.normality_defect() < 1e-13);

            let fv = L2Element::new(sp.clone(), g.vector(n).into_entries()).unwrap();
            let (a, b) = l2_slice_split(&fv, &f());
            prop_assert!((fv.norm_sqr() - a.norm_sqr() - b.norm_sqr()).abs() < 1e-12 * fv.norm_sqr().max(1.0));
            let q = g.quaternion();
            let lhs = m_phi(&phi, &fv.scale_right(q)).unwrap();
            let rhs = m_phi(&phi, &fv).unwrap().scale_right(q);
            prop_assert!(lhs.dist(&rhs).unwrap() < 1e-13);
            prop_assert!(l2_inner(&fv, &fv).unwrap().im().norm() < 1e-13);

            let k = g.index(n) + 1;
            let p = pushforward(&sp, |a| Quaternion::from_real((a.w as usize % k) as f64)).unwrap();
            prop_assert!((p.space.total_mass() - sp.total_mass()).abs() < 1e-13);
        }
    }
}
