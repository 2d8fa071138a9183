//! Certified numerical analysis of terraced (Rhaly) matrices on l2.
//!
//! A terraced matrix is the lower-triangular infinite matrix with constant
//! rows `alpha_k` on and below the diagonal; it generalizes the classical
//! Cesaro averaging operator. This crate evaluates the quantitative theory of
//! such operators on exactly computable instances:
//!
//! * coefficient sequences with certified tail energies ([`sequences`]),
//! * dense sections and O(n) prefix-sum application ([`operator`]),
//! * interval functionals `L`, `K`, `J` and their sandwich relations
//!   ([`interval`]),
//! * dyadic profiles and certified norm / essential-norm / Schatten brackets
//!   ([`criteria`]),
//! * threshold cut sequences tying interval functionals to approximation
//!   numbers ([`epsl`]),
//! * a dense SVD engine with truncation schedules ([`spectral`]),
//! * Hadamard-multiplier matrices built from a coefficient sequence
//!   ([`hadamard`]).
//!
//! Quantities defined by infinite suprema or series are reported as
//! [`bracket::Bracket`] enclosures, and semi-decidable properties come back
//! as three-valued [`bracket::Verdict`]s: `yes` and `no` always carry a
//! certificate, everything else is `undetermined`.
//!
//! ```
//! use terraced::criteria::{norm_bracket, CriteriaParams};
//! use terraced::{SequenceSpec, Verdict};
//!
//! // The averaging operator: bounded with norm 2, inside the bracket.
//! let spec = SequenceSpec::cesaro();
//! let params = CriteriaParams { trunc_n: 256, ..Default::default() };
//! let (bracket, bounded) = norm_bracket(&spec, &params);
//! assert_eq!(bounded, Verdict::Yes);
//! assert!(bracket.contains(2.0));
//! ```

pub mod bracket;
pub mod config;
pub mod corpus;
pub mod criteria;
pub mod epsl;
pub mod hadamard;
pub mod interval;
pub mod jsonout;
pub mod linalg;
pub mod operator;
pub mod sequences;
pub mod spectral;
pub mod util;
pub mod verify;

mod error;

pub use bracket::{Bracket, Verdict};
pub use error::TerracedError;
pub use sequences::SequenceSpec;

pub type Result<T> = std::result::Result<T, TerracedError>;
