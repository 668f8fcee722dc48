use thiserror::Error;

use crate::algebra::Violation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid inheritance tensor: {}", join(.0))]
    InvalidTensor(Vec<Violation>),

    #[error("invalid stochastic matrix: {0}")]
    InvalidStochastic(String),

    #[error("parameter {name} = {value} outside [0, 1]")]
    ParameterRange { name: &'static str, value: f64 },

    #[error("state is not on the simplex product: {0}")]
    NotOnSimplex(String),

    #[error("not an ideal: {0}")]
    NotAnIdeal(String),

    #[error("degenerate basis change: {0}")]
    DegenerateBasisChange(String),

    #[error("{0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
