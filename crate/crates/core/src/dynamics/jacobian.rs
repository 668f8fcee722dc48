use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::linalg::eigenvalues;

use super::Operator;

/// Eigenvalues with `| |λ| − 1 | ≤ HYPERBOLICITY_BAND` count as lying on the unit circle.
pub const HYPERBOLICITY_BAND: f64 = 1e-9;

const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Attracting,
    Repelling,
    Saddle,
    NonHyperbolic,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Attracting => "attracting",
            Self::Repelling => "repelling",
            Self::Saddle => "saddle",
            Self::NonHyperbolic => "non-hyperbolic",
        }
    }
}

/// Jacobian of `op` in reduced coordinates at `r`.
///
/// `H` and `T` use closed forms; general tensors use central differences.
pub fn jacobian(op: &Operator, r: &[f64]) -> DMatrix<f64> {
    match op {
        Operator::TwoByTwo(p) => {
            let (x, y) = (r[0], r[1]);
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    (p.b - p.a) * (1.0 - y),
                    -(p.a + (p.b - p.a) * x),
                    -(p.c + (p.d - p.c) * y),
                    (p.d - p.c) * (1.0 - x),
                ],
            )
        }
        Operator::Hard { n, .. } => {
            let m = r.len();
            let fx = n - 1;
            let x1 = 1.0 - r[..fx].iter().sum::<f64>();
            let y1 = 1.0 - r[fx..].iter().sum::<f64>();
            DMatrix::from_fn(m, m, |row, col| match (row < fx, col < fx) {
                (true, true) => if row == col { y1 } else { 0.0 },
                (true, false) => -r[row],
                (false, true) => -r[row],
                (false, false) => if row == col { x1 } else { 0.0 },
            })
        }
        Operator::General(_) => numeric_jacobian(op, r, FD_STEP),
    }
}

/// Central-difference Jacobian of the reduced map.
pub fn numeric_jacobian(op: &Operator, r: &[f64], h: f64) -> DMatrix<f64> {
    let m = r.len();
    let mut jac = DMatrix::zeros(m, m);
    let mut probe = r.to_vec();
    for col in 0..m {
        probe[col] = r[col] + h;
        let plus = op.apply_reduced(&probe);
        probe[col] = r[col] - h;
        let minus = op.apply_reduced(&probe);
        probe[col] = r[col];
        for row in 0..m {
            jac[(row, col)] = (plus[row] - minus[row]) / (2.0 * h);
        }
    }
    jac
}

/// Eigenvalues of the Jacobian at `r`.
pub fn eigenvalues_at(op: &Operator, r: &[f64]) -> Vec<Complex64> {
    eigenvalues(&jacobian(op, r))
}

/// Classifies a fixed point by the moduli of its Jacobian eigenvalues.
pub fn classify(eigs: &[Complex64]) -> Result<Stability, Error> {
    if eigs.is_empty() {
        return Err(Error::Precondition("cannot classify an empty spectrum".into()));
    }
    let moduli: Vec<f64> = eigs.iter().map(|l| l.norm()).collect();
    if moduli.iter().any(|m| (m - 1.0).abs() <= HYPERBOLICITY_BAND) {
        return Ok(Stability::NonHyperbolic);
    }
    Ok(if moduli.iter().all(|m| *m < 1.0) {
        Stability::Attracting
    } else if moduli.iter().all(|m| *m > 1.0) {
        Stability::Repelling
    } else {
        Stability::Saddle
    })
}
