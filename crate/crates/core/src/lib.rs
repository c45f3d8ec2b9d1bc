//! Quaternionic operator theory on `H^n`, made executable.
//!
//! Right-linear operators are stored as quaternionic matrices acting on column
//! vectors with scalars multiplying from the right. On top of the scalar and
//! matrix layers the crate builds:
//!
//! * [`slice`]: an anti-self-adjoint unitary `J` commuting with a normal
//!   operator, the slice space `H_+^{Jm}`, restriction to it and the unique
//!   right-linear extension back;
//! * [`spectrum`]: spherical spectra reported as eigenspheres, with an
//!   independent `Δ_q`-singularity oracle;
//! * [`wvnb`]: diagonal-plus-small-compact splittings of normal operators in
//!   operator norm and, for spectra on rectifiable curves, in Hilbert–Schmidt
//!   norm, plus a truncation harness for operators on `ℓ²(H)`.

pub mod error;
pub mod linalg;
pub mod par;
pub mod qop;
pub mod qspace;
pub mod quat;
pub mod sample;
pub mod slice;
pub mod spectrum;
pub mod tol;
pub mod wvnb;

pub use error::{Error, Result};
pub use par::Execution;
pub use qop::{Classification, QMatrix};
pub use qspace::{Basis, QVector};
pub use quat::{Quaternion, SliceFrame, SlicePoint, UnitImaginary};
pub use slice::{SliceMatrix, SliceStructure};
pub use spectrum::{EigenSphere, SpectrumReport};
pub use tol::Tolerances;
pub use wvnb::{Decomposition, Mode};

