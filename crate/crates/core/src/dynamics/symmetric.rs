//! The symmetric case `a = c`, `b = d` of the `n = ν = 2` operator.

use serde::Serialize;

use crate::algebra::TwoByTwoParams;
use crate::error::Error;

use super::operator::evolve_2x2;

/// `a = 1 − (1−b)²/4`: above it `(x*, x*)` loses stability and a 2-cycle appears.
pub fn symmetric_threshold(b: f64) -> f64 {
    1.0 - (1.0 - b) * (1.0 - b) / 4.0
}

/// The restriction `f(x) = (1−x)(a+(b−a)x)` to the invariant diagonal.
pub fn reduced_map(a: f64, b: f64, x: f64) -> f64 {
    (1.0 - x) * (a + (b - a) * x)
}

/// The diagonal fixed point for `b ≠ 1`, written as
/// `2a / (1 − b + 2a + √((1−b)² + 4a))` so that it stays accurate as `a → b`
/// (where it reduces to `a/(1+a)`).
pub fn fixed_point_symmetric(a: f64, b: f64) -> f64 {
    let s = ((1.0 - b) * (1.0 - b) + 4.0 * a).sqrt();
    let den = 1.0 - b + 2.0 * a + s;
    if den == 0.0 {
        0.0
    } else {
        2.0 * a / den
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicOrbit {
    pub period: usize,
    pub p1: f64,
    pub p2: f64,
    /// `(f²)'` along the orbit, `4 − 4a + 2b − b²`.
    pub multiplier: f64,
}

/// The 2-cycle `{p1, p2}` of `f`, which exists iff `1 − (1−b)²/4 < a ≤ 1`.
/// Returns `None` when `a = b`, `b = 1` or the existence condition fails.
pub fn two_periodic(a: f64, b: f64) -> Option<PeriodicOrbit> {
    if a == b || b == 1.0 || a > 1.0 {
        return None;
    }
    let radicand = (1.0 - b) * (1.0 - b) - 4.0 * (1.0 - a);
    if radicand <= 0.0 {
        return None;
    }
    let root = radicand.sqrt();
    let num = 2.0 * a - b - 1.0;
    let den = 2.0 * (a - b);
    Some(PeriodicOrbit {
        period: 2,
        p1: (num - root) / den,
        p2: (num + root) / den,
        multiplier: 4.0 - 4.0 * a + 2.0 * b - b * b,
    })
}

/// Long-run behaviour of a trajectory of the symmetric operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SymmetricOutcome {
    /// `a = b < 1`: the limit `(a/(1+a), a/(1+a))`.
    ClosedFormLimit { limit: (f64, f64) },
    /// `a = b = 1`: even terms are `z0`, odd terms `(1−y0, 1−x0)`.
    Alternating { even: (f64, f64), odd: (f64, f64) },
    /// Iteration converged; `at_fixed_point` tells whether the limit is the
    /// diagonal fixed point `(x*, x*)`.
    Converged { limit: (f64, f64), at_fixed_point: bool, steps: usize, max_gap_defect: f64 },
    /// Iteration settled on a 2-cycle; `orbit` is set when it is the
    /// diagonal cycle `{(p1,p1), (p2,p2)}`.
    Cycle { even: (f64, f64), odd: (f64, f64), orbit: Option<PeriodicOrbit>, steps: usize, max_gap_defect: f64 },
    /// Neither stopping rule fired within the budget.
    Inconclusive { last: (f64, f64), steps: usize, max_gap_defect: f64 },
}

/// Classifies the trajectory of `z0` under the symmetric operator.
///
/// Along numeric iteration it tracks `|(x'−y') − b(x−y)|`, which is zero
/// as an algebraic identity; the largest value seen is reported.
pub fn symmetric_limit(
    a: f64,
    b: f64,
    z0: (f64, f64),
    max_steps: usize,
    tol: f64,
) -> Result<SymmetricOutcome, Error> {
    let p = TwoByTwoParams::new(a, b, a, b)?;
    if !(0.0..=1.0).contains(&z0.0) || !(0.0..=1.0).contains(&z0.1) {
        return Err(Error::NotOnSimplex(format!("initial point {z0:?} outside [0,1]²")));
    }
    if a == b && a < 1.0 {
        let v = a / (1.0 + a);
        return Ok(SymmetricOutcome::ClosedFormLimit { limit: (v, v) });
    }
    if a == 1.0 && b == 1.0 {
        return Ok(SymmetricOutcome::Alternating { even: z0, odd: (1.0 - z0.1, 1.0 - z0.0) });
    }

    let dist = |u: (f64, f64), v: (f64, f64)| (u.0 - v.0).abs().max((u.1 - v.1).abs());
    let mut prev2: Option<(f64, f64)> = None;
    let mut prev = z0;
    let mut max_gap_defect: f64 = 0.0;
    for step in 1..=max_steps {
        let next = evolve_2x2(&p, prev);
        max_gap_defect = max_gap_defect.max(((next.0 - next.1) - b * (prev.0 - prev.1)).abs());
        if dist(next, prev) < tol {
            let xs = fixed_point_symmetric(a, b);
            let at_fixed_point = b != 1.0 && dist(next, (xs, xs)) < 1e-8;
            return Ok(SymmetricOutcome::Converged { limit: next, at_fixed_point, steps: step, max_gap_defect });
        }
        if let Some(before) = prev2 {
            if dist(next, before) < tol {
                let orbit = two_periodic(a, b).filter(|o| {
                    let (u, v) = ((o.p1, o.p1), (o.p2, o.p2));
                    (dist(next, u) < 1e-8 && dist(prev, v) < 1e-8) || (dist(next, v) < 1e-8 && dist(prev, u) < 1e-8)
                });
                // `next` has the parity of `before`, i.e. of z0 when `step` is even.
                let (even, odd) = if step % 2 == 0 { (next, prev) } else { (prev, next) };
                return Ok(SymmetricOutcome::Cycle { even, odd, orbit, steps: step, max_gap_defect });
            }
        }
        prev2 = Some(prev);
        prev = next;
    }
    Ok(SymmetricOutcome::Inconclusive { last: prev, steps: max_steps, max_gap_defect })
}
