//! Verification scenarios and the JSON reports the command-line tool emits.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounded::{
    conjugate_equivalence, fibonacci_probes, multiplication_form, off_sphere_probes, slice_spectrum_check,
    sphere_spectrum, DecompositionReport, DeltaOracle, REPORT_SCHEMA,
};
use crate::bridge::{chi, spectral_decompose, CMatrix};
use crate::error::{Result, SpectraError};
use crate::measure::{ess_sup, l2_slice_split, m_phi, m_phi_norm, AtomicMeasureSpace, L2Element, Symbol};
use crate::qmodule::QVector;
use crate::qoperator::QMatrix;
use crate::quaternion::{ImaginaryUnit, Quaternion, SliceFrame};
use crate::random::Gen;
use crate::slice::{build_j, quaternionify, SliceStructure};
use crate::unbounded::{
    bounded_transform, commuting_j_unbounded, inverse_transform, unbounded_multiplication_form, z_extension_check,
    UnboundedSim,
};

type Q = Quaternion<f64>;
type M = QMatrix<f64>;

pub const MAX_N: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum OperatorClass {
    Normal,
    AntiSelfAdjoint,
    Unitary,
    Real,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Inputs {
    Files(Vec<String>),
    Generator { seed: u64, n: usize, class: OperatorClass },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub inputs: Inputs,
    pub m: Q,
    pub tolerances: BTreeMap<String, f64>,
}

impl Scenario {
    /// The seeded operator described by a generator input.
    pub fn generate(&self) -> Result<M> {
        match &self.inputs {
            Inputs::Generator { seed, n, class } => {
                let mut g = Gen::<f64>::new(*seed);
                Ok(match class {
                    OperatorClass::Normal => g.normal(*n),
                    OperatorClass::AntiSelfAdjoint => g.anti_self_adjoint(*n),
                    OperatorClass::Unitary => g.unitary_normal(*n),
                    OperatorClass::Real => g.self_adjoint(*n),
                })
            }
            Inputs::Files(_) => Err(SpectraError::InvalidArgument("scenario reads files, not a generator".into())),
        }
    }

    pub fn frame(&self) -> Result<SliceFrame<f64>> {
        parse_frame(&self.m)
    }
}

pub fn parse_frame(m: &Q) -> Result<SliceFrame<f64>> {
    Ok(SliceFrame::complete(ImaginaryUnit::new(*m)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub schema: String,
    pub scenario: String,
    pub status: Status,
    pub checks: Vec<Check>,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing: Timing,
}

impl VerificationReport {
    fn new(scenario: &str, seed: Option<u64>, checks: Vec<Check>, started: Instant) -> Self {
        let status = if checks.iter().all(|c| c.pass) { Status::Pass } else { Status::Fail };
        Self {
            schema: REPORT_SCHEMA.into(),
            scenario: scenario.into(),
            status,
            checks,
            seed,
            decomposition: None,
            error: None,
            timing: Timing {
                elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Exit status for a failed command: 2 for violated mathematical
/// preconditions, 3 for unusable input.
pub fn exit_code(e: &SpectraError) -> i32 {
    match e {
        SpectraError::NotNormal { .. }
        | SpectraError::NotCommuting { .. }
        | SpectraError::NotInvertible { .. }
        | SpectraError::ZeroSymbol { .. }
        | SpectraError::NonInjective { .. }
        | SpectraError::OutsideUnitDisc { .. }
        | SpectraError::NoConvergence { .. }
        | SpectraError::PairingFailure { .. }
        | SpectraError::InvariantViolated { .. } => 2,
        _ => 3,
    }
}

struct Checks {
    list: Vec<Check>,
    tol: Option<f64>,
}

impl Checks {
    fn new(tol: Option<f64>) -> Self {
        Self { list: Vec::new(), tol }
    }

    fn push(&mut self, name: &str, residual: f64, default_tol: f64) {
        let tol = self.tol.unwrap_or(default_tol);
        self.list.push(Check {
            name: name.into(),
            residual,
            tol,
            pass: residual <= tol,
        });
    }

    /// A check whose tolerance is not overridable, such as a count that must be zero.
    fn push_exact(&mut self, name: &str, residual: f64, tol: f64) {
        self.list.push(Check {
            name: name.into(),
            residual,
            tol,
            pass: residual <= tol,
        });
    }
}

fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, f64::max)
}

/// Runs every module's invariants on seeded data of dimension `n`.
pub fn cmd_selftest(seed: u64, n: usize, tol: Option<f64>, m: &Q) -> Result<VerificationReport> {
    if n == 0 || n > MAX_N {
        return Err(SpectraError::InvalidArgument(format!("--n must be in 1..={MAX_N}, got {n}")));
    }
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(SpectraError::InvalidArgument(format!("--tol must be positive, got {t}")));
        }
    }
    let f = parse_frame(m)?;
    let started = Instant::now();
    let mut g = Gen::<f64>::new(seed);
    let mut c = Checks::new(tol);

    // quaternion algebra
    let triples: Vec<(Q, Q, Q)> = (0..200).map(|_| (g.quaternion(), g.quaternion(), g.quaternion())).collect();
    c.push("quaternion.associativity", max_of(triples.iter().map(|(p, q, r)| ((*p * *q) * *r).dist(&(*p * (*q * *r))))), 1e-14);
    c.push(
        "quaternion.norm_multiplicative",
        max_of(triples.iter().map(|(p, q, _)| ((*p * *q).norm() - p.norm() * q.norm()).abs())),
        1e-14,
    );
    c.push(
        "quaternion.frame",
        (f.m() * f.n() + f.n() * f.m()).norm().max((f.n().norm() - 1.0).abs()).max(f.m().dot(&f.n()).abs()),
        1e-14,
    );
    c.push(
        "quaternion.slice_split",
        max_of(triples.iter().map(|(p, _, _)| {
            let (a, b) = f.split(p);
            f.combine(&a, &b).dist(p)
        })),
        1e-14,
    );

    // right module
    let basis = g.unitary_basis(n);
    c.push("qmodule.orthonormality", basis.orthonormality_error(), 1e-10);
    let xs: Vec<QVector<f64>> = (0..8).map(|_| g.vector(n)).collect();
    c.push(
        "qmodule.completeness",
        max_of(xs.iter().map(|x| basis.reconstruct(&basis.expand(x).unwrap()).unwrap().dist(x))),
        1e-10,
    );

    // operators and the complex bridge
    let b = g.matrix(n);
    let b2 = g.matrix(n);
    let scale = b.frobenius_norm() * b2.frobenius_norm();
    c.push(
        "qoperator.adjoint",
        max_of(xs.windows(2).map(|w| {
            let lhs = w[0].inner(&b.apply(&w[1]).unwrap()).unwrap();
            let rhs = b.adjoint().apply(&w[0]).unwrap().inner(&w[1]).unwrap();
            lhs.dist(&rhs) / (b.frobenius_norm() * w[0].norm() * w[1].norm())
        })),
        1e-12,
    );
    let chi_ab = chi(&(&b * &b2), &f).cm.to_complex();
    let chi_a_chi_b = &chi(&b, &f).cm.to_complex() * &chi(&b2, &f).cm.to_complex();
    c.push("bridge.homomorphism", (&chi_ab - &chi_a_chi_b).frobenius_norm() / scale, 1e-12);

    // spectral decomposition and multiplication form
    let (a, d) = g.normal_with_known_spectrum(n);
    let an = a.frobenius_norm();
    let dec = spectral_decompose(&a, &f)?;
    c.push("decompose.residual", dec.residual / an, 1e-10);
    c.push("decompose.unitarity", dec.unitarity_error(), 1e-10);
    let mut got: Vec<_> = dec.orbits();
    let mut want: Vec<_> = d.iter().map(crate::quaternion::SimilarityOrbit::of).collect();
    let key = |o: &crate::quaternion::SimilarityOrbit<f64>| (o.re, o.im_norm);
    got.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    want.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    c.push("decompose.orbits", max_of(got.iter().zip(&want).map(|(x, y)| x.distance(y))), 1e-8);

    let mf = multiplication_form(&a, &f)?;
    c.push("bounded.reconstruction", mf.residual / an, 1e-9);
    c.push("bounded.norm_identity", mf.norm_error / mf.op_norm, 1e-9);

    let sp = sphere_spectrum(&mf);
    let oracle = DeltaOracle::new(&a)?;
    let mut disagreements = 0usize;
    for o in &sp.orbits {
        let gap = 2e-3 * (mf.op_norm + o.re.abs() + o.im_norm);
        disagreements += fibonacci_probes(o, 16).iter().filter(|q| !oracle.in_spectrum(q, 1e-7)).count();
        disagreements += off_sphere_probes(o, &sp, 16, gap).iter().filter(|q| oracle.in_spectrum(q, 1e-7)).count();
    }
    c.push_exact("bounded.oracle_disagreements", disagreements as f64, 0.0);

    let s = build_j(&dec)?;
    let report = slice_spectrum_check(&a, &s)?;
    let opn = mf.op_norm.max(1.0);
    c.push("bounded.slice_spectrum", report.plus_error / opn, 1e-8);
    c.push("bounded.slice_conjugate", report.conjugate_error / opn, 1e-8);

    let w = conjugate_equivalence(&mf)?;
    c.push("bounded.conjugate_unitary", (&(&w.adjoint() * &w) - &M::identity(n)).frobenius_norm(), 1e-10);
    c.push(
        "bounded.conjugate_equivalence",
        (&(&(&w.adjoint() * &a.adjoint()) * &w) - &a).frobenius_norm() / an,
        1e-9,
    );

    // slice structures and extension
    c.push("slice.structure", s.structure_error(), 1e-10);
    let sv = SliceStructure::from_unitary(&g.unitary(n), &f)?;
    let t1 = g.complex_normal(n, &f);
    let t2 = g.complex_normal(n, &f);
    let e1 = sv.extend(&t1)?;
    let e2 = sv.extend(&t2)?;
    c.push("slice.extension_norm", (e1.op_norm()? - t1.op_norm()?).abs() / t1.op_norm()?.max(1.0), 1e-9);
    c.push(
        "slice.extension_product",
        (&sv.extend(&t1.mul(&t2))? - &(&e1 * &e2)).frobenius_norm() / (t1.frobenius_norm() * t2.frobenius_norm()),
        1e-10,
    );
    c.push("slice.extension_adjoint", (&sv.extend(&t1.adjoint())? - &e1.adjoint()).frobenius_norm(), 1e-10);
    let q = g.quaternion();
    c.push(
        "slice.extension_delta",
        (&e1.delta(&q) - &sv.extend(&t1.delta(&q))?).frobenius_norm() / (1.0 + t1.frobenius_norm()).powi(2),
        1e-10,
    );
    let mut ortho = 0.0f64;
    for _ in 0..50 {
        let x = g.vector(n);
        let y = g.vector(n);
        let xp = s.project_plus(&x)?;
        let ym = s.project_minus(&y)?;
        let sum = xp.inner(&ym)? + ym.inner(&xp)?;
        ortho = ortho.max(sum.norm() / (x.norm() * y.norm()));
    }
    c.push("slice.plus_minus_orthogonality", ortho, 1e-10);

    // K × K
    let k = quaternionify(n, &f)?;
    let mut assoc = 0.0f64;
    for _ in 0..50 {
        let v = k.pair(g.slice_vector(n, &f).into_entries(), g.slice_vector(n, &f).into_entries())?;
        let (p, r) = (g.quaternion(), g.quaternion());
        let lhs = k.to_qvector(&k.scale(&k.scale(&v, &p), &r));
        let rhs = k.to_qvector(&k.scale(&v, &(p * r)));
        assoc = assoc.max(lhs.dist(&rhs));
    }
    c.push("kxk.associativity", assoc, 1e-12);

    // bounded transform
    let bt = bounded_transform(&a)?;
    c.push("unbounded.contraction", (bt.norm - 1.0).max(0.0), 1e-12);
    c.push("unbounded.adjoint", (&bt.z.adjoint() - &bounded_transform(&a.adjoint())?.z).frobenius_norm(), 1e-10);
    let opa = mf.op_norm;
    c.push("unbounded.round_trip", (&inverse_transform(&bt.z)? - &a).frobenius_norm() / (1.0 + opa * opa), 1e-8);
    c.push("unbounded.z_extension", z_extension_check(&t1, &sv)?, 1e-9);
    let sj = commuting_j_unbounded(&a, &f)?;
    c.push("unbounded.commuting_j", sj.j.commutator_norm(&a) / an, 1e-9);
    let trunc = unbounded_multiplication_form(&UnboundedSim::linear(64, 10.0, &f)?, &f)?;
    c.push("unbounded.truncation", trunc.residual, 1e-10);

    // measure
    let weights: Vec<f64> = (0..n).map(|i| if i == 0 { 1.0 } else { g.real_in(0.0, 1.0) }).collect();
    let msp = AtomicMeasureSpace::new((0..n).map(|i| Q::from_real(i as f64)).collect(), weights)?;
    let phi = Symbol::new(msp.clone(), (0..n).map(|_| g.slice_value(&f)).collect(), f)?;
    c.push("measure.norm_identity", (m_phi_norm(&phi) - ess_sup(&phi)).abs(), 1e-12);
    let fv = L2Element::new(msp, g.vector(n).into_entries())?;
    let (f1, f2) = l2_slice_split(&fv, &f);
    c.push("measure.slice_split", (fv.norm_sqr() - f1.norm_sqr() - f2.norm_sqr()).abs(), 1e-12);

    Ok(VerificationReport::new("selftest", Some(seed), c.list, started))
}

/// Left multiplication by `((√3 + 1) − j + k)/√(6 + 2√3)`.
pub fn example_unitary() -> Q {
    let s3 = 3f64.sqrt();
    Q::new(s3 + 1.0, 0.0, -1.0, 1.0).scale((6.0 + 2.0 * s3).sqrt().recip())
}

/// `M_φ` with `φ(t) = (i − j − k)t` on a uniform grid over `[0, 1]` is
/// unitarily equivalent to `M_η`, `η(t) = √3·i·t`.
pub fn cmd_example(grid: usize) -> Result<VerificationReport> {
    if grid < 2 {
        return Err(SpectraError::InvalidArgument(format!("--grid must be at least 2, got {grid}")));
    }
    let started = Instant::now();
    let mut c = Checks::new(None);
    let s3 = 3f64.sqrt();
    let u = example_unitary();
    let v = Q::new(0.0, 1.0, -1.0, -1.0);
    c.push("example.unit_modulus", (u.norm() - 1.0).abs(), 1e-15);
    c.push("example.conjugation", (u.conj() * Q::i().scale(s3) * u).dist(&v), 1e-14);

    let sp = AtomicMeasureSpace::uniform_grid(grid, 0.0, 1.0)?;
    let fphi = SliceFrame::complete(ImaginaryUnit::normalized(v)?);
    let phi = Symbol::new(sp.clone(), sp.atoms().iter().map(|t| v.scale(t.w)).collect(), fphi)?;
    let eta = Symbol::new(sp.clone(), sp.atoms().iter().map(|t| Q::i().scale(s3 * t.w)).collect(), SliceFrame::standard())?;
    let left = |g: &L2Element<f64>, q: Q| L2Element::new(g.space.clone(), g.values().iter().map(|x| q * *x).collect());
    // both sides act diagonally, so atom indicators realize the operator norm
    let mut diff = 0.0f64;
    for i in 0..grid {
        let mut e = vec![Q::zero(); grid];
        e[i] = Q::one();
        let e = L2Element::new(sp.clone(), e)?;
        let lhs = left(&m_phi(&eta, &left(&e, u)?)?, u.conj())?;
        let rhs = m_phi(&phi, &e)?;
        diff = diff.max(lhs.dist(&rhs)? / e.norm());
    }
    c.push("example.unitary_equivalence", diff, 1e-12);
    let tmax = sp.atoms().iter().map(|t| t.w).fold(f64::MIN, f64::max);
    c.push("example.norm", (m_phi_norm(&phi) - s3 * tmax).abs(), 1e-12);
    c.push("example.ess_sup", (ess_sup(&phi) - s3 * tmax).abs(), 1e-12);
    Ok(VerificationReport::new("example", None, c.list, started))
}

/// Multiplication form of a matrix read from JSON, with its norm identity
/// and slice-spectrum checks.
pub fn cmd_decompose(matrix_json: &str, m: &Q, tol: Option<f64>) -> Result<VerificationReport> {
    let f = parse_frame(m)?;
    let a = M::from_json(matrix_json)?;
    let started = Instant::now();
    let mut c = Checks::new(tol);
    let mf = multiplication_form(&a, &f)?;
    let an = a.frobenius_norm().max(f64::MIN_POSITIVE);
    c.push("decompose.reconstruction", mf.residual / an, 1e-9);
    c.push("decompose.norm_identity", mf.norm_error / mf.op_norm.max(f64::MIN_POSITIVE), 1e-9);
    let s = build_j(&spectral_decompose(&a, &f)?)?;
    let r = slice_spectrum_check(&a, &s)?;
    let opn = mf.op_norm.max(1.0);
    c.push("decompose.slice_spectrum", r.plus_error / opn, 1e-8);
    c.push("decompose.slice_conjugate", r.conjugate_error / opn, 1e-8);
    let mut report = VerificationReport::new("decompose", None, c.list, started);
    report.decomposition = Some(DecompositionReport::new(&mf));
    Ok(report)
}

/// Bounded transform of a matrix read from JSON, or with `inverse` its
/// inverse applied to the matrix as `Z`.
pub fn cmd_transform(matrix_json: &str, inverse: bool, tol: Option<f64>) -> Result<VerificationReport> {
    let a = M::from_json(matrix_json)?;
    let started = Instant::now();
    let mut c = Checks::new(tol);
    if inverse {
        let norm = a.op_norm()?;
        match inverse_transform(&a) {
            Ok(t) => {
                let back = bounded_transform(&t)?;
                c.push("transform.inverse_norm", norm, 1.0 - 1e-8);
                c.push("transform.inverse_round_trip", (&back.z - &a).frobenius_norm(), 1e-10);
                Ok(VerificationReport::new("transform", None, c.list, started))
            }
            Err(e) => {
                c.push_exact("transform.inverse_norm", norm, 1.0 - 1e-8);
                let mut report = VerificationReport::new("transform", None, c.list, started);
                report.error = Some(e.to_string());
                Ok(report)
            }
        }
    } else {
        let bt = bounded_transform(&a)?;
        let opa = a.op_norm()?;
        c.push("transform.norm", bt.norm, 1.0);
        c.push("transform.square_root", bt.residual, 1e-10);
        c.push("transform.adjoint", (&bt.z.adjoint() - &bounded_transform(&a.adjoint())?.z).frobenius_norm(), 1e-10);
        c.push("transform.round_trip", (&inverse_transform(&bt.z)? - &a).frobenius_norm() / (1.0 + opa * opa), 1e-8);
        if a.is_normal(1e-10) {
            c.push("transform.normal", bt.z.normality_defect(), 1e-10);
        }
        Ok(VerificationReport::new("transform", None, c.list, started))
    }
}

/// `{"n": ..., "entries": ...}` for a square matrix, as read by the commands.
pub fn matrix_json(a: &M) -> Result<String> {
    a.to_json()
}

/// A `C_m` matrix as a quaternionic JSON matrix.
pub fn cmatrix_json(a: &CMatrix<f64>) -> Result<String> {
    a.to_qmatrix().to_json()
}
