use crate::algebra::{validate_tensor, InheritanceTensor, TwoByTwoParams};
use crate::error::Error;

use super::{PopulationState, Trajectory};

pub const DEFAULT_MAX_STEPS: usize = 100_000;
pub const DEFAULT_TOL: f64 = 1e-12;

/// An evolution operator `V: S^{n−1} × S^{ν−1} → S^{n−1} × S^{ν−1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    /// Built from an arbitrary (validated) inheritance tensor.
    General(InheritanceTensor<f64>),
    /// The hard-constrained operator `H` (identity matrices `A`, `B`).
    Hard { n: usize, nu: usize },
    /// The `n = ν = 2` operator `T` acting on `(x, y) = (x_2, y_2)`.
    TwoByTwo(TwoByTwoParams<f64>),
}

impl Operator {
    pub fn general(t: InheritanceTensor<f64>) -> Result<Self, Error> {
        Ok(Self::General(t.validated()?))
    }

    pub fn hard(n: usize, nu: usize) -> Result<Self, Error> {
        if n == 0 || nu == 0 {
            return Err(Error::Precondition("n and ν must be positive".into()));
        }
        Ok(Self::Hard { n, nu })
    }

    pub fn two_by_two(p: TwoByTwoParams<f64>) -> Result<Self, Error> {
        let p = TwoByTwoParams::new(p.a, p.b, p.c, p.d)?;
        Ok(Self::TwoByTwo(p))
    }

    /// `(n, ν)` of the state space.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Self::General(t) => (t.n(), t.nu()),
            Self::Hard { n, nu } => (*n, *nu),
            Self::TwoByTwo(_) => (2, 2),
        }
    }

    /// Number of reduced coordinates, `n + ν − 2`.
    pub fn reduced_dim(&self) -> usize {
        let (n, nu) = self.dims();
        n + nu - 2
    }

    pub fn apply(&self, z: &PopulationState) -> Result<PopulationState, Error> {
        let (n, nu) = self.dims();
        if z.n() != n {
            return Err(Error::Dimension { expected: n, found: z.n() });
        }
        if z.nu() != nu {
            return Err(Error::Dimension { expected: nu, found: z.nu() });
        }
        Ok(self.apply_unchecked(z))
    }

    pub(crate) fn apply_unchecked(&self, z: &PopulationState) -> PopulationState {
        match self {
            Self::General(t) => evolve_raw(t, z, true),
            Self::Hard { .. } => evolve_hard(z),
            Self::TwoByTwo(p) => {
                let (x, y) = evolve_2x2(p, z.pair());
                PopulationState::from_pair(x, y)
            }
        }
    }

    /// The map written in reduced coordinates. It is a polynomial map on all
    /// of `ℝ^{n+ν−2}`, so no normalisation is applied here.
    pub fn apply_reduced(&self, r: &[f64]) -> Vec<f64> {
        let (n, nu) = self.dims();
        match self {
            Self::TwoByTwo(p) => {
                let (x, y) = evolve_2x2(p, (r[0], r[1]));
                vec![x, y]
            }
            Self::Hard { .. } => evolve_hard(&PopulationState::from_reduced(n, nu, r)).reduced(),
            Self::General(t) => evolve_raw(t, &PopulationState::from_reduced(n, nu, r), false).reduced(),
        }
    }
}

/// The evolution operator of an inheritance tensor:
/// `x'_j = Σ_{i,k} pf[i,k,j] x_i y_k`, `y'_l = Σ_{i,k} pm[i,k,l] x_i y_k`.
pub fn evolve(t: &InheritanceTensor<f64>, z: &PopulationState) -> Result<PopulationState, Error> {
    let violations = validate_tensor(t);
    if !violations.is_empty() {
        return Err(Error::InvalidTensor(violations));
    }
    if z.n() != t.n() {
        return Err(Error::Dimension { expected: t.n(), found: z.n() });
    }
    if z.nu() != t.nu() {
        return Err(Error::Dimension { expected: t.nu(), found: z.nu() });
    }
    Ok(evolve_raw(t, z, true))
}

// Sums evolve as s' = s_x·s_y, so a rounding error in the sums doubles each
// step; dividing by the computed sums keeps long trajectories on the simplex.
fn evolve_raw(t: &InheritanceTensor<f64>, z: &PopulationState, renormalise: bool) -> PopulationState {
    let (n, nu) = (t.n(), t.nu());
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; nu];
    for (i, xi) in z.x().iter().enumerate() {
        for (k, yk) in z.y().iter().enumerate() {
            let w = xi * yk;
            if w == 0.0 {
                continue;
            }
            for (xj, p) in x.iter_mut().zip(t.female_row(i, k)) {
                *xj += p * w;
            }
            for (yl, p) in y.iter_mut().zip(t.male_row(i, k)) {
                *yl += p * w;
            }
        }
    }
    if renormalise {
        for v in [&mut x, &mut y] {
            let s: f64 = v.iter().sum();
            if s > 0.0 {
                v.iter_mut().for_each(|c| *c /= s);
            }
        }
    }
    PopulationState::new_unchecked(x, y)
}

/// The hard operator `H`:
/// `x'_1 = 1 − y_1(1 − x_1)`, `x'_j = y_1 x_j`, `y'_1 = 1 − x_1(1 − y_1)`, `y'_l = x_1 y_l`.
pub fn evolve_hard(z: &PopulationState) -> PopulationState {
    let (x, y) = (z.x(), z.y());
    let (x1, y1) = (x[0], y[0]);
    let mut nx = Vec::with_capacity(x.len());
    nx.push(1.0 - y1 * (1.0 - x1));
    nx.extend(x[1..].iter().map(|xj| y1 * xj));
    let mut ny = Vec::with_capacity(y.len());
    ny.push(1.0 - x1 * (1.0 - y1));
    ny.extend(y[1..].iter().map(|yl| x1 * yl));
    PopulationState::new_unchecked(nx, ny)
}

/// The operator `T`: `x' = (1−y)(a+(b−a)x)`, `y' = (1−x)(c+(d−c)y)`.
pub fn evolve_2x2(p: &TwoByTwoParams<f64>, (x, y): (f64, f64)) -> (f64, f64) {
    ((1.0 - y) * (p.a + (p.b - p.a) * x), (1.0 - x) * (p.c + (p.d - p.c) * y))
}

/// Iterates `op` from `z0` for at most `max_steps` applications.
///
/// Stops at the first `k` with `‖z^(k+1) − z^(k)‖∞ < tol` (converged) or with
/// `‖z^(k+2) − z^(k)‖∞ < tol` while `‖z^(k+1) − z^(k)‖∞ ≥ tol` (period 2).
pub fn iterate(
    op: &Operator,
    z0: &PopulationState,
    max_steps: usize,
    tol: f64,
) -> Result<Trajectory, Error> {
    if max_steps == 0 {
        return Err(Error::Precondition("max_steps must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol must be positive, got {tol}")));
    }
    let first = op.apply(z0)?;
    let mut states = vec![z0.clone(), first];
    let mut out = Trajectory {
        states: Vec::new(),
        converged: false,
        limit: None,
        detected_period: None,
        stopped_at: None,
    };
    loop {
        let m = states.len() - 1;
        if states[m].distance(&states[m - 1]) < tol {
            out.converged = true;
            out.limit = Some(states[m].clone());
            out.stopped_at = Some(m - 1);
            break;
        }
        if m >= 2 && states[m].distance(&states[m - 2]) < tol {
            out.detected_period = Some(2);
            out.stopped_at = Some(m - 2);
            break;
        }
        if m == max_steps {
            break;
        }
        let next = op.apply_unchecked(&states[m]);
        states.push(next);
    }
    out.states = states;
    Ok(out)
}
