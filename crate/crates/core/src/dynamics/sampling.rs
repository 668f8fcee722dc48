use rand::Rng;

use super::PopulationState;

/// Uniform sample from the standard simplex in `ℝ^dim` (normalised
/// exponential spacings).
pub fn random_simplex<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|c| *c /= s);
    v
}

/// Uniform sample from `S^{n−1} × S^{ν−1}`.
pub fn random_state<R: Rng + ?Sized>(n: usize, nu: usize, rng: &mut R) -> PopulationState {
    PopulationState::new_unchecked(random_simplex(n, rng), random_simplex(nu, rng))
}

/// Random state on the slice `x_1 y_1 = 0`: one of `x_1`, `y_1` (chosen at
/// random) is set to zero. Needs `n ≥ 2` for `x_1 = 0` and `ν ≥ 2` for `y_1 = 0`.
pub fn random_boundary_state<R: Rng + ?Sized>(n: usize, nu: usize, rng: &mut R) -> Option<PopulationState> {
    let zero_x = match (n >= 2, nu >= 2) {
        (false, false) => return None,
        (true, false) => true,
        (false, true) => false,
        (true, true) => rng.gen_bool(0.5),
    };
    let with_zero_first = |len: usize, rng: &mut R| {
        let mut v = vec![0.0];
        v.extend(random_simplex(len - 1, rng));
        v
    };
    let (x, y) = if zero_x {
        (with_zero_first(n, rng), random_simplex(nu, rng))
    } else {
        (random_simplex(n, rng), with_zero_first(nu, rng))
    };
    Some(PopulationState::new_unchecked(x, y))
}
