use rand::Rng;
use serde::Serialize;

use crate::error::Error;

use super::sampling::{random_boundary_state, random_state};
use super::{Operator, PopulationState};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernsteinReport {
    /// `‖V(V(z)) − V(z)‖∞ ≤ tol` at every sampled `z`.
    pub is_bernstein: bool,
    /// The same identity on the slice `x_1 y_1 = 0`. Vacuously true when the
    /// slice is empty (`n = ν = 1`).
    pub partial_set_holds: bool,
    pub max_defect: f64,
    pub max_partial_defect: f64,
    pub samples: usize,
}

/// Samples `V² = V` on the whole state space and on the slice `x_1 y_1 = 0`.
pub fn bernstein_check<R: Rng>(
    op: &Operator,
    samples: usize,
    tol: f64,
    rng: &mut R,
) -> Result<BernsteinReport, Error> {
    if samples == 0 {
        return Err(Error::Precondition("samples must be at least 1".into()));
    }
    let (n, nu) = op.dims();
    let defect = |z: &PopulationState| -> f64 {
        let once = op.apply_unchecked(z);
        op.apply_unchecked(&once).distance(&once)
    };
    let mut max_defect: f64 = 0.0;
    let mut max_partial_defect: f64 = 0.0;
    for _ in 0..samples {
        max_defect = max_defect.max(defect(&random_state(n, nu, rng)));
        if let Some(z) = random_boundary_state(n, nu, rng) {
            max_partial_defect = max_partial_defect.max(defect(&z));
        }
    }
    Ok(BernsteinReport {
        is_bernstein: max_defect <= tol,
        partial_set_holds: max_partial_defect <= tol,
        max_defect,
        max_partial_defect,
        samples,
    })
}
