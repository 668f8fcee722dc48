//! Evolution algebras of bisexual populations.
//!
//! * [`algebra`]: inheritance tensors, constrained parameterisations and
//!   multiplication tables (exact or floating).
//! * [`dynamics`]: the quadratic evolution operators, trajectories, fixed
//!   points, Jacobians, closed-form limits and 2-cycles.
//! * [`structure`]: linear forms, subalgebra and ideal checks, derived
//!   algebras, quotients and basis changes.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod scalar;
pub mod structure;

pub use error::Error;
pub use scalar::{Rational, Scalar};
