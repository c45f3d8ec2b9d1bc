//! Diagonal-plus-small splittings `N = U diag(d) U* + K` of normal operators.
//!
//! The pipeline builds a complex structure `J` commuting with `N`, restricts
//! to the slice space, diagonalizes the resulting complex normal matrix,
//! snaps its eigenvalues to a fixed net and extends everything back. The
//! diagonal entries therefore never depend on the particular input beyond
//! which net cell its eigenvalues fall in.

mod curve;
mod decompose;
mod net;
mod truncation;
mod verify;

pub use curve::Curve;
pub use decompose::{decompose_hs, decompose_op_norm, Decomposition, Mode, NetRecord, Norms};
pub use net::{NetPoint, NetSpec, Snap};
pub use truncation::{rows_to_csv, truncation_study, DiagFormula, OpDescriptor, TruncationConfig, TruncationRow};
pub use verify::{verify, Check, VerifyReport};
