use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use crate::algebra::{AlgebraElement, MultiplicationTable};
use crate::error::Error;
use crate::scalar::Scalar;

use super::{mul, unit, LinearSpan};

/// A product `v · e_u` that leaves the span.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealWitness<S> {
    /// Index into the span's basis.
    pub generator: usize,
    /// Index of the algebra basis vector.
    pub basis_index: usize,
    pub product: Vec<S>,
}

/// First product `v · e_u` (v a basis vector of `span`) outside `span`.
pub fn ideal_witness<S: Scalar>(span: &LinearSpan<S>, tab: &MultiplicationTable<S>) -> Option<IdealWitness<S>> {
    let d = tab.dim();
    for (g, v) in span.basis().iter().enumerate() {
        for u in 0..d {
            let product = mul(tab, v, &unit(d, u));
            if !span.contains(&product) {
                return Some(IdealWitness { generator: g, basis_index: u, product });
            }
        }
    }
    None
}

/// Whether `span · B ⊆ span`. The algebra is commutative, so one side suffices.
pub fn is_ideal<S: Scalar>(span: &LinearSpan<S>, tab: &MultiplicationTable<S>) -> bool {
    ideal_witness(span, tab).is_none()
}

/// Smallest ideal containing `generators`.
pub fn ideal_closure<S: Scalar>(tab: &MultiplicationTable<S>, generators: &[Vec<S>]) -> LinearSpan<S> {
    let d = tab.dim();
    let mut span = LinearSpan::new(d, generators);
    loop {
        let products: Vec<Vec<S>> = span
            .basis()
            .iter()
            .flat_map(|v| (0..d).map(move |u| (v, u)))
            .map(|(v, u)| mul(tab, v, &unit(d, u)))
            .filter(|p| !span.contains(p))
            .collect();
        if products.is_empty() {
            return span;
        }
        span = span.extended(&products);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DerivedDims {
    pub dim_sq: usize,
    pub sq_idempotent: bool,
}

/// `dim B²` and whether `(B²)(B²) = B²`.
pub fn derived_dims<S: Scalar>(tab: &MultiplicationTable<S>) -> DerivedDims {
    let d = tab.dim();
    let products: Vec<Vec<S>> = (0..d)
        .flat_map(|u| (u..d).map(move |v| (u, v)))
        .map(|(u, v)| tab.product_of_basis(u, v).to_vec())
        .collect();
    let sq = LinearSpan::new(d, &products);
    let basis = sq.basis();
    let sq_products: Vec<Vec<S>> = (0..basis.len())
        .flat_map(|i| (i..basis.len()).map(move |j| (i, j)))
        .map(|(i, j)| mul(tab, &basis[i], &basis[j]))
        .collect();
    let sq_sq = LinearSpan::new(d, &sq_products);
    DerivedDims { dim_sq: sq.dim(), sq_idempotent: sq_sq.same_as(&sq) }
}

/// Left-associated product `((e_head e_{t1}) e_{t2}) … e_{tk}`.
pub fn product_chain<S: Scalar>(
    tab: &MultiplicationTable<S>,
    head: usize,
    tail: &[usize],
) -> Result<AlgebraElement<S>, Error> {
    let d = tab.dim();
    if let Some(bad) = std::iter::once(&head).chain(tail).find(|i| **i >= d) {
        return Err(Error::Dimension { expected: d, found: *bad });
    }
    let mut cur = unit::<S>(d, head);
    for &i in tail {
        cur = mul(tab, &cur, &unit(d, i));
    }
    Ok(AlgebraElement::from_coords(tab.split(), cur))
}

/// Left multiplication operators `L_u v = v · e_u` as dense float matrices.
fn multiplication_operators<S: Scalar>(tab: &MultiplicationTable<S>) -> Vec<DMatrix<f64>> {
    let d = tab.dim();
    (0..d)
        .map(|u| DMatrix::from_fn(d, d, |w, s| tab.constant(s, u, w).to_f64()))
        .collect()
}

/// `max_u ‖L_u v − λ_u v‖∞` with the best `λ_u`, for unit-norm `v`.
fn eigen_residual(ops: &[DMatrix<f64>], v: &DVector<f64>) -> f64 {
    ops.iter()
        .map(|l| {
            let lv = l * v;
            let lambda = lv.dot(v);
            (lv - v * lambda).amax()
        })
        .fold(0.0, f64::max)
}

fn normalised_sign<S: Scalar>(mut v: Vec<S>) -> Vec<S> {
    if let Some(first) = v.iter().find(|c| !c.is_negligible()) {
        if first.is_negative() {
            v = v.into_iter().map(|c| -c).collect();
        }
    }
    v
}

/// Best rational approximation with denominator at most `max_den`, if
/// within `1e−9`.
fn rationalise(v: f64, max_den: i64) -> Option<(i64, i64)> {
    (1..=max_den).find_map(|q| {
        let p = (v * q as f64).round();
        ((v - p / q as f64).abs() < 1e-9).then_some((p as i64, q))
    })
}

fn structured_candidates(d: usize) -> Vec<Vec<i64>> {
    // All {−1, 0, 1} vectors up to sign when that is affordable, otherwise
    // the ones with at most three nonzero entries.
    let full = d <= 10;
    let mut out = Vec::new();
    let total = 3usize.pow(d as u32);
    if full {
        for code in 1..total {
            let mut c = code;
            let v: Vec<i64> = (0..d)
                .map(|_| {
                    let digit = (c % 3) as i64 - 1;
                    c /= 3;
                    digit
                })
                .collect();
            if v.iter().find(|x| **x != 0) == Some(&1) {
                out.push(v);
            }
        }
    } else {
        for i in 0..d {
            for j in i..d {
                for k in j..d {
                    for signs in 0..4 {
                        let mut v = vec![0i64; d];
                        v[i] = 1;
                        if j != i {
                            v[j] += if signs & 1 == 0 { 1 } else { -1 };
                        }
                        if k != j {
                            v[k] += if signs & 2 == 0 { 1 } else { -1 };
                        }
                        if v.iter().any(|x| x.abs() > 1) || v.iter().all(|x| *x == 0) {
                            continue;
                        }
                        if !out.contains(&v) {
                            out.push(v);
                        }
                    }
                }
            }
        }
    }
    out
}

/// One-dimensional ideals `ℝv` of `tab`.
///
/// Two candidate sources are screened in floating point and then confirmed
/// with [`is_ideal`] in the table's own field:
/// * structured vectors with entries in `{−1, 0, 1}`, which include the
///   shapes allowed by the linear forms (`H_0`, `H_1`, `Z_0`);
/// * `restarts` random starts of an alternating minimisation of
///   `Σ_u ‖L_u v − λ_u v‖²`, rationalised before confirmation.
pub fn one_dim_ideal_search<S: Scalar, R: Rng + ?Sized>(
    tab: &MultiplicationTable<S>,
    restarts: usize,
    rng: &mut R,
) -> Vec<LinearSpan<S>> {
    let d = tab.dim();
    let ops = multiplication_operators(tab);
    let mut found: Vec<LinearSpan<S>> = Vec::new();
    let confirm = |coords: Vec<S>, found: &mut Vec<LinearSpan<S>>| {
        let span = LinearSpan::new(d, &[normalised_sign(coords)]);
        if span.dim() == 1 && is_ideal(&span, tab) && !found.iter().any(|f| f.same_as(&span)) {
            found.push(span);
        }
    };

    for cand in structured_candidates(d) {
        let v = DVector::from_iterator(d, cand.iter().map(|c| *c as f64)).normalize();
        if eigen_residual(&ops, &v) < 1e-9 {
            confirm(cand.iter().map(|c| S::from_ratio(*c, 1)).collect(), &mut found);
        }
    }

    for _ in 0..restarts {
        let mut v = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0)).normalize();
        for _ in 0..200 {
            let lambdas: Vec<f64> = ops.iter().map(|l| (l * &v).dot(&v)).collect();
            let mut m = DMatrix::zeros(d, d);
            for (l, lambda) in ops.iter().zip(&lambdas) {
                let shifted = l - DMatrix::identity(d, d) * *lambda;
                m += shifted.transpose() * &shifted;
            }
            let eig = SymmetricEigen::new(m);
            let imin = eig.eigenvalues.imin();
            v = eig.eigenvectors.column(imin).into_owned();
        }
        if eigen_residual(&ops, &v) > 1e-8 {
            continue;
        }
        let scale = v.amax();
        let pivot = v.iter().position(|c| c.abs() == scale).expect("nonzero vector");
        let v = &v / v[pivot];
        let coords: Option<Vec<S>> =
            v.iter().map(|c| rationalise(*c, 64).map(|(p, q)| S::from_ratio(p, q))).collect();
        if let Some(coords) = coords {
            confirm(coords, &mut found);
        }
    }
    found
}

/// Outcome of the randomised search for ideals of dimension at least 2.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport<S> {
    pub candidates_checked: usize,
    /// Proper ideals of dimension ≥ 2 that were found.
    pub counterexamples: Vec<LinearSpan<S>>,
    pub verdict: String,
}

/// Looks for proper ideals of dimension ≥ 2 among `B²` and the ideals
/// generated by `trials` random small-integer vectors (one or two each).
pub fn hypothesis_sweep<S: Scalar, R: Rng + ?Sized>(
    tab: &MultiplicationTable<S>,
    trials: usize,
    rng: &mut R,
) -> SweepReport<S> {
    let d = tab.dim();
    let mut counterexamples: Vec<LinearSpan<S>> = Vec::new();
    let consider = |span: LinearSpan<S>, out: &mut Vec<LinearSpan<S>>| {
        let k = span.dim();
        if k >= 2 && k < d && is_ideal(&span, tab) && !out.iter().any(|c| c.same_as(&span)) {
            out.push(span);
        }
    };

    let products: Vec<Vec<S>> = (0..d)
        .flat_map(|u| (0..d).map(move |v| (u, v)))
        .map(|(u, v)| tab.product_of_basis(u, v).to_vec())
        .collect();
    consider(LinearSpan::new(d, &products), &mut counterexamples);

    for _ in 0..trials {
        let gens = rng.gen_range(1..=2);
        let generators: Vec<Vec<S>> = (0..gens)
            .map(|_| (0..d).map(|_| S::from_ratio(rng.gen_range(-2..=2), 1)).collect())
            .collect();
        consider(ideal_closure(tab, &generators), &mut counterexamples);
    }
    let verdict = if counterexamples.is_empty() {
        "no counterexample found within budget".to_string()
    } else {
        format!("{} proper ideal(s) of dimension >= 2 found", counterexamples.len())
    };
    SweepReport { candidates_checked: trials + 1, counterexamples, verdict }
}
