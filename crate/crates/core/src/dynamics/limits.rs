use serde::Serialize;

use super::operator::evolve_hard;
use super::PopulationState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitCase {
    Equal,
    FemaleDominant,
    MaleDominant,
    BoundaryX,
    BoundaryY,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitResult {
    pub limit: PopulationState,
    pub case_tag: LimitCase,
    /// Set when the trajectory reaches the limit after finitely many steps.
    pub attained_at: Option<usize>,
}

/// Closed-form limit of an `H`-trajectory.
///
/// The difference `x_1 − y_1` is conserved, so the type-1 share of the
/// dominant sex tends to 1 and the other sex keeps the gap in its non-1 types.
/// If `x_1 = 0` or `y_1 = 0` the first image is already fixed.
pub fn limit_hard(z0: &PopulationState) -> LimitResult {
    let (x, y) = (z0.x(), z0.y());
    let (x1, y1) = (x[0], y[0]);
    let (n, nu) = (x.len(), y.len());
    let e1 = |len: usize| {
        let mut v = vec![0.0; len];
        v[0] = 1.0;
        v
    };

    if x1 == 0.0 || y1 == 0.0 {
        let case_tag = if x1 == 0.0 { LimitCase::BoundaryX } else { LimitCase::BoundaryY };
        let limit = evolve_hard(z0);
        let attained_at = if limit == *z0 { 0 } else { 1 };
        return LimitResult { limit, case_tag, attained_at: Some(attained_at) };
    }

    let attained = |limit: &PopulationState| (limit == z0).then_some(0);
    if x1 == y1 {
        let limit = PopulationState::new_unchecked(e1(n), e1(nu));
        let attained_at = attained(&limit);
        return LimitResult { limit, case_tag: LimitCase::Equal, attained_at };
    }
    let gap = (x1 - y1).abs();
    let shrink = |v: &[f64], first: f64| {
        let mut out = Vec::with_capacity(v.len());
        out.push(1.0 - gap);
        out.extend(v[1..].iter().map(|c| gap * c / (1.0 - first)));
        out
    };
    let (limit, case_tag) = if x1 > y1 {
        (PopulationState::new_unchecked(e1(n), shrink(y, y1)), LimitCase::FemaleDominant)
    } else {
        (PopulationState::new_unchecked(shrink(x, x1), e1(nu)), LimitCase::MaleDominant)
    };
    let attained_at = attained(&limit);
    LimitResult { limit, case_tag, attained_at }
}
