use rand::Rng;
use serde::Serialize;

use crate::algebra::{AlgebraElement, MultiplicationTable};
use crate::error::Error;
use crate::scalar::Scalar;

use super::mul;

const FORM_TOL: f64 = 1e-12;
const CLOSURE_TOL: f64 = 1e-10;

/// `X(z) = Σ x_i`, `Y(z) = Σ y_k` and membership in `H_0`, `H_1`, `Z_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Forms<S> {
    pub x: S,
    pub y: S,
    pub in_h0: bool,
    pub in_h1: bool,
    pub in_z0: bool,
}

pub fn forms_xy<S: Scalar>(z: &AlgebraElement<S>) -> Forms<S> {
    let sum = |v: &[S]| v.iter().fold(S::zero(), |acc, c| acc + c.clone());
    let x = sum(z.xs());
    let y = sum(z.ys());
    let is = |v: &S, target: i64| v.near(&S::from_ratio(target, 1), FORM_TOL);
    Forms {
        in_h0: is(&x, 0) && is(&y, 0),
        in_h1: is(&x, 1) && is(&y, 1),
        in_z0: (x.clone() * y.clone()).near(&S::zero(), FORM_TOL),
        x,
        y,
    }
}

/// Sets tested for closure under multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "set", rename_all = "kebab-case")]
pub enum ClosureSet {
    /// `X = Y = 0`.
    H0,
    /// `X = Y = 1`.
    H1,
    /// `S^{n−1} × S^{ν−1}`.
    Simplex,
    /// The affine set `X = x`, `Y = y`.
    Level { x: f64, y: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureReport {
    pub closed: bool,
    /// Largest distance of a sampled product from the set's defining equations.
    pub max_violation: f64,
    pub samples: usize,
}

fn sample<R: Rng + ?Sized>(set: ClosureSet, n: usize, nu: usize, rng: &mut R) -> Vec<f64> {
    let part = |len: usize, target: Option<f64>, rng: &mut R| -> Vec<f64> {
        match target {
            None => crate::dynamics::random_simplex(len, rng),
            Some(t) => {
                let mut v: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let shift = (t - v.iter().sum::<f64>()) / len as f64;
                v.iter_mut().for_each(|c| *c += shift);
                v
            }
        }
    };
    let (tx, ty) = match set {
        ClosureSet::H0 => (Some(0.0), Some(0.0)),
        ClosureSet::H1 => (Some(1.0), Some(1.0)),
        ClosureSet::Simplex => (None, None),
        ClosureSet::Level { x, y } => (Some(x), Some(y)),
    };
    let mut v = part(n, tx, rng);
    v.extend(part(nu, ty, rng));
    v
}

fn violation(set: ClosureSet, split: usize, v: &[f64]) -> f64 {
    let (xs, ys) = v.split_at(split);
    let (sx, sy) = (xs.iter().sum::<f64>(), ys.iter().sum::<f64>());
    match set {
        ClosureSet::H0 => sx.abs().max(sy.abs()),
        ClosureSet::H1 => (sx - 1.0).abs().max((sy - 1.0).abs()),
        ClosureSet::Level { x, y } => (sx - x).abs().max((sy - y).abs()),
        ClosureSet::Simplex => {
            let negative = v.iter().fold(0.0f64, |m, c| m.max(-c));
            negative.max((sx - 1.0).abs()).max((sy - 1.0).abs())
        }
    }
}

/// Samples pairs from `set` and checks that their products stay in it.
pub fn closure_check<S: Scalar, R: Rng + ?Sized>(
    tab: &MultiplicationTable<S>,
    set: ClosureSet,
    samples: usize,
    rng: &mut R,
) -> Result<ClosureReport, Error> {
    if samples == 0 {
        return Err(Error::Precondition("samples must be at least 1".into()));
    }
    let t = tab.to_f64();
    let (n, nu) = (t.split(), t.dim() - t.split());
    let mut max_violation: f64 = 0.0;
    for _ in 0..samples {
        let z = sample(set, n, nu, rng);
        let w = sample(set, n, nu, rng);
        max_violation = max_violation.max(violation(set, n, &mul(&t, &z, &w)));
    }
    Ok(ClosureReport { closed: max_violation <= CLOSURE_TOL, max_violation, samples })
}

/// How `ℝz` sits in the algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum OneDimClass<S> {
    /// `z² = λz` with `λ ≠ 0`; `idempotent = z/λ` satisfies `p² = p`.
    FixedPoint { lambda: S, idempotent: AlgebraElement<S> },
    /// `z² = 0`.
    AbsoluteNilpotent,
    /// `z²` is not a multiple of `z`.
    NotClosed,
}

pub fn one_dim_classify<S: Scalar>(
    z: &AlgebraElement<S>,
    tab: &MultiplicationTable<S>,
) -> Result<OneDimClass<S>, Error> {
    if z.dim() != tab.dim() {
        return Err(Error::Dimension { expected: tab.dim(), found: z.dim() });
    }
    if z.is_zero() {
        return Err(Error::Precondition("z must be nonzero".into()));
    }
    let sq = mul(tab, z.coords(), z.coords());
    if sq.iter().all(Scalar::is_negligible) {
        return Ok(OneDimClass::AbsoluteNilpotent);
    }
    let pivot = (0..z.dim())
        .max_by(|&i, &j| z.coords()[i].magnitude().total_cmp(&z.coords()[j].magnitude()))
        .expect("nonempty");
    let lambda = sq[pivot].clone() / z.coords()[pivot].clone();
    let collinear = sq
        .iter()
        .zip(z.coords())
        .all(|(s, c)| (s.clone() - lambda.clone() * c.clone()).is_negligible());
    if !collinear || lambda.is_negligible() {
        return Ok(OneDimClass::NotClosed);
    }
    let idempotent = z.scale(&(S::one() / lambda.clone()));
    Ok(OneDimClass::FixedPoint { lambda, idempotent })
}
