//! Exact-arithmetic and numerical toolkit for the combinatorics of theta
//! characteristics under `Sp(g, F_2)` and for the linear relations between
//! theta constants.
//!
//! The crate has two halves that meet in [`relations`]:
//!
//! * an exact half — bit-packed linear algebra over `F_2` ([`f2`]), theta
//!   characteristics and their symplectic pairing ([`chars`]), the affine
//!   group action and its sign character ([`symplectic`]), group enumeration
//!   ([`group`]), signed permutation representations ([`rep`]) and the
//!   integer eigenspace decompositions of the pairing operators ([`fay`]);
//! * a numerical half — evaluation of theta nullwerte and their gradients
//!   with rigorous truncation bounds ([`theta`]) and rank certificates for
//!   sampled value matrices ([`numrank`]).
//!
//! All randomness is seeded and all numerical verdicts carry the evidence
//! (residuals, pivots, gap ratios) they were derived from.

pub mod chars;
pub mod error;
pub mod exact;
pub mod f2;
pub mod fay;
pub mod group;
pub mod numrank;
pub mod relations;
pub mod rep;
pub mod symplectic;
pub mod theta;

pub use chars::{CharTable, Characteristic, Parity};
pub use error::{Error, Result};
// dependency types that appear in the public API
pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::{BigRational, Ratio};
pub use f2::{BitVec, F2Matrix};
pub use fay::{ExactSubspaceBasis, FayDimensions, FayOperator, RationalProjector};
pub use group::{GroupEnumeration, Stabilizer, TransitivityReport};
pub use numrank::RankReport;
pub use rep::SignedPermMatrix;
pub use symplectic::{GeneratorKind, GeneratorSet, IntegerSymplectic, SymplecticF2};
pub use theta::{GradientEval, SiegelPoint, Sym4Tensor, ThetaEval};
