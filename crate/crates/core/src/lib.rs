//! Numerical function theory on the unit disk: exact polynomial Wronskians,
//! atomic singular inner functions, argument-principle zero localization, and
//! boundary-limit estimation of singular inner factors.
//!
//! The crate is organized around three computational stories:
//!
//! * deep zeros (multiplicity > n) of every nontrivial combination of n+1
//!   linearly independent functions lie in the zero set of their Wronskian,
//! * the singular inner factor of every such combination divides the singular
//!   factor of the Wronskian when the inputs are smooth enough,
//! * Frostman shifts of a singular inner function exhibit pairwise-disjoint
//!   singular supports, so no single singular factor dominates them all.
//!
//! See the `scenario` module and the `hardyfactor` binary for the runnable
//! experiment harness.

pub mod eval;
pub mod exact;
pub mod factor;
pub mod poly;
pub mod scenario;
pub mod structured;
pub mod wronskian;
pub mod zeros;

pub use eval::{DiskFunction, DiskFunctionDerivs};
pub use exact::ExactComplex;
pub use poly::{ExactPoly, FloatPoly, Poly};
pub use structured::{AtomicSingularMeasure, FrostmanShift, StructuredFunction, StructuredTerm};
