//! Evolution operators on `S^{n-1} × S^{ν-1}` and their dynamics.
//!
//! Three operators are provided behind [`Operator`]: the general one built
//! from any inheritance tensor, the hard-constrained operator `H`, and the
//! four-parameter operator `T` of the `n = ν = 2` model (with the symmetric
//! case `a = c`, `b = d` as a special case).
//!
//! Jacobians use *reduced coordinates*: `x_1` and `y_1` are eliminated via
//! `x_1 = 1 − Σ_{i≥2} x_i`, `y_1 = 1 − Σ_{l≥2} y_l`, so a state is described
//! by `(x_2, …, x_n, y_2, …, y_ν)`. For `n = ν = 2` these are exactly the
//! `(x, y)` coordinates of `T`.

mod bernstein;
mod fixed;
mod jacobian;
mod limits;
mod operator;
mod sampling;
mod symmetric;

use serde::Serialize;

use crate::error::Error;

pub use bernstein::{bernstein_check, BernsteinReport};
pub use fixed::{
    fixed_points_2x2, fixed_points_hard, fixed_points_numeric, fixed_points_symmetric, Family,
    FamilyShape, FixedPoint, FixedPointReport, ParametricFamily, FIXED_POINT_RESIDUAL_TOL,
};
pub use jacobian::{classify, eigenvalues_at, jacobian, numeric_jacobian, Stability, HYPERBOLICITY_BAND};
pub use limits::{limit_hard, LimitCase, LimitResult};
pub use operator::{
    evolve, evolve_2x2, evolve_hard, iterate, Operator, DEFAULT_MAX_STEPS, DEFAULT_TOL,
};
pub use sampling::{random_boundary_state, random_simplex, random_state};
pub use symmetric::{
    fixed_point_symmetric, reduced_map, symmetric_limit, symmetric_threshold, two_periodic,
    PeriodicOrbit, SymmetricOutcome,
};

/// Tolerance on `Σ x_i = 1`, `Σ y_l = 1` for population states.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// A population state `(x, y)`: female and male type distributions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PopulationState {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl PopulationState {
    /// Checks nonnegativity and unit sums (within [`SIMPLEX_TOL`]).
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, Error> {
        check_distribution(&x, "x")?;
        check_distribution(&y, "y")?;
        Ok(Self { x, y })
    }

    /// No simplex check; used for images of valid states.
    pub(crate) fn new_unchecked(x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { x, y }
    }

    /// The 4-dimensional state `((1−x, x), (1−y, y))` of the `n = ν = 2` model.
    pub fn from_pair(x: f64, y: f64) -> Self {
        Self { x: vec![1.0 - x, x], y: vec![1.0 - y, y] }
    }

    /// Rebuilds a state from reduced coordinates `(x_2.., y_2..)`.
    pub fn from_reduced(n: usize, nu: usize, r: &[f64]) -> Self {
        assert_eq!(r.len(), n + nu - 2, "reduced coordinate length");
        let (rx, ry) = r.split_at(n - 1);
        let lift = |rest: &[f64]| {
            let mut v = Vec::with_capacity(rest.len() + 1);
            v.push(1.0 - rest.iter().sum::<f64>());
            v.extend_from_slice(rest);
            v
        };
        Self { x: lift(rx), y: lift(ry) }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn nu(&self) -> usize {
        self.y.len()
    }

    /// `(x_2, …, x_n, y_2, …, y_ν)`.
    pub fn reduced(&self) -> Vec<f64> {
        self.x[1..].iter().chain(&self.y[1..]).copied().collect()
    }

    /// `(x_2, y_2)` for the `n = ν = 2` model.
    pub fn pair(&self) -> (f64, f64) {
        (self.x[1], self.y[1])
    }

    /// All coordinates, females first.
    pub fn coords(&self) -> Vec<f64> {
        self.x.iter().chain(&self.y).copied().collect()
    }

    /// `‖self − other‖∞`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.x
            .iter()
            .zip(&other.x)
            .chain(self.y.iter().zip(&other.y))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_distribution(v: &[f64], name: &str) -> Result<(), Error> {
    if v.is_empty() {
        return Err(Error::NotOnSimplex(format!("{name} is empty")));
    }
    if let Some(bad) = v.iter().find(|c| !c.is_finite() || **c < 0.0) {
        return Err(Error::NotOnSimplex(format!("{name} has entry {bad}")));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::NotOnSimplex(format!("{name} sums to {sum}")));
    }
    Ok(())
}

/// States `z^(0), z^(1), …` produced by [`iterate`].
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub states: Vec<PopulationState>,
    pub converged: bool,
    pub limit: Option<PopulationState>,
    pub detected_period: Option<usize>,
    /// Index `k` at which the stopping rule fired: `‖z^(k+1) − z^(k)‖∞ < tol`
    /// for convergence, `‖z^(k+2) − z^(k)‖∞ < tol` for a 2-cycle.
    pub stopped_at: Option<usize>,
}

impl Trajectory {
    pub fn last(&self) -> &PopulationState {
        self.states.last().expect("trajectory holds the initial state")
    }
}
