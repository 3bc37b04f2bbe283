//! Quaternionic normal operators in finite dimension: slice decomposition,
//! spherical spectra, the bounded transform and the multiplication form
//! `A = U*·M_φ·U`.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.

pub mod bounded;
pub mod bridge;
pub mod error;
pub mod measure;
pub mod qmodule;
pub mod qoperator;
pub mod quaternion;
pub mod random;
pub mod scalar;
pub mod slice;
pub mod unbounded;
pub mod verify;

pub use bounded::{classify, conjugate_equivalence, delta_oracle, multiplication_form, slice_spectrum_check, sphere_spectrum, Classification, DecompositionReport, MultiplicationForm, SphereSpectrum};
pub use bridge::{chi, eig_normal_complex, spectral_decompose, CMatrix, ChiImage, ComplexMatrix, SpectralDecomposition};
pub use error::{Result, SpectraError};
pub use measure::{ess_ran, ess_sup, l2_inner, l2_slice_split, m_phi, m_phi_norm, pushforward, xi, xi_inverse, AtomicMeasureSpace, L2Element, MeasureFile, Symbol};
pub use qmodule::{gram_schmidt, HilbertBasis, QVector};
pub use qoperator::QMatrix;
pub use quaternion::{ImaginaryUnit, Quaternion, SimilarityOrbit, SliceFrame};
pub use scalar::Real;
pub use unbounded::{bounded_transform, commuting_j_unbounded, inverse_transform, unbounded_multiplication_form, z_extension_check, BoundedTransform, UnboundedForm, UnboundedSim};
pub use slice::{build_j, extend_between, quaternionify, QuaternionifiedSpace, SlicePair, SliceStructure};

pub type Quat = Quaternion<f64>;
pub type Unit = ImaginaryUnit<f64>;
pub type Frame = SliceFrame<f64>;
pub type Orbit = SimilarityOrbit<f64>;
pub type Vector = QVector<f64>;
pub type Basis = HilbertBasis<f64>;
pub type Matrix = QMatrix<f64>;
pub type SliceMatrix = CMatrix<f64>;
pub type Decomposition = SpectralDecomposition<f64>;
pub type Form = MultiplicationForm<f64>;
pub type Space = AtomicMeasureSpace<f64>;
pub type Structure = SliceStructure<f64>;
