//! Small dense linear algebra over [`Scalar`] fields.
//!
//! Vectors are rows (`Vec<S>`). Exact fields use fraction arithmetic with
//! exact zero tests; `f64` uses partial pivoting with [`FLOAT_ZERO_TOL`] and
//! singular-value thresholding for rank.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::scalar::{Scalar, FLOAT_ZERO_TOL};

/// Reduced row echelon form. Returns the nonzero rows and the pivot columns.
pub fn rref<S: Scalar>(rows: &[Vec<S>]) -> (Vec<Vec<S>>, Vec<usize>) {
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let best = (r..m.len())
            .filter(|&i| !m[i][col].is_negligible())
            .max_by(|&i, &j| m[i][col].magnitude().total_cmp(&m[j][col].magnitude()));
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = S::one() / m[r][col].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i == r || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone();
            for j in 0..ncols {
                let delta = factor.clone() * m[r][j].clone();
                m[i][j] = m[i][j].clone() - delta;
            }
            if !S::EXACT {
                m[i][col] = S::zero();
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Rank of the span of `rows`.
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    if S::EXACT {
        rref(rows).1.len()
    } else {
        let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j].to_f64());
        m.singular_values()
            .iter()
            .filter(|s| **s > FLOAT_ZERO_TOL)
            .count()
    }
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span<S: Scalar>(basis: &[Vec<S>], v: &[S]) -> bool {
    if v.iter().all(Scalar::is_negligible) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let mut rows = basis.to_vec();
    let before = rank(&rows);
    rows.push(v.to_vec());
    rank(&rows) == before
}

/// Whether two lists of vectors span the same subspace.
pub fn same_span<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> bool {
    let ra = rank(a);
    if ra != rank(b) {
        return false;
    }
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    rank(&both) == ra
}

/// Greedily keeps the rows that increase the rank.
pub fn independent_rows<S: Scalar>(rows: &[Vec<S>]) -> Vec<Vec<S>> {
    let mut kept: Vec<Vec<S>> = Vec::new();
    for row in rows {
        if !in_span(&kept, row) {
            kept.push(row.clone());
        }
    }
    kept
}

/// Solves `Σ c_i basis[i] = v` for linearly independent `basis`.
/// Returns `None` when `v` is not in the span.
pub fn coordinates<S: Scalar>(basis: &[Vec<S>], v: &[S]) -> Option<Vec<S>> {
    let k = basis.len();
    let dim = v.len();
    // Augmented system with one equation per ambient coordinate.
    let rows: Vec<Vec<S>> = (0..dim)
        .map(|j| {
            let mut row: Vec<S> = basis.iter().map(|b| b[j].clone()).collect();
            row.push(v[j].clone());
            row
        })
        .collect();
    let (reduced, pivots) = rref(&rows);
    if pivots.contains(&k) {
        return None;
    }
    if pivots.len() < k {
        return None;
    }
    let mut coeffs = vec![S::zero(); k];
    for (row, &p) in reduced.iter().zip(&pivots) {
        coeffs[p] = row[k].clone();
    }
    Some(coeffs)
}

/// Linear combination `Σ c_i rows[i]`.
pub fn combine<S: Scalar>(coeffs: &[S], rows: &[Vec<S>], dim: usize) -> Vec<S> {
    let mut out = vec![S::zero(); dim];
    for (c, row) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            *o = o.clone() + c.clone() * r.clone();
        }
    }
    out
}

/// Eigenvalues of a real square matrix, sorted by real then imaginary part.
///
/// 1×1 and 2×2 use closed forms (trace/determinant); larger matrices go
/// through a real Schur decomposition.
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    assert!(m.is_square(), "eigenvalues of a non-square matrix");
    let mut eigs = match m.nrows() {
        0 => Vec::new(),
        1 => vec![Complex64::new(m[(0, 0)], 0.0)],
        2 => eigenvalues_2x2(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]).to_vec(),
        _ => m.clone().complex_eigenvalues().iter().copied().collect(),
    };
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    eigs
}

/// Roots of `λ² − tr·λ + det` for the matrix `[[p, q], [r, s]]`.
pub fn eigenvalues_2x2(p: f64, q: f64, r: f64, s: f64) -> [Complex64; 2] {
    let half_tr = 0.5 * (p + s);
    // (p − s)²/4 + qr avoids cancellation in tr²/4 − det.
    let disc = 0.25 * (p - s) * (p - s) + q * r;
    if disc >= 0.0 {
        let root = disc.sqrt();
        // Sign-aware form keeps the smaller root accurate.
        let big = if half_tr >= 0.0 { half_tr + root } else { half_tr - root };
        let det = p * s - q * r;
        let small = if big != 0.0 { det / big } else { half_tr - root.copysign(half_tr) };
        let (lo, hi) = if big <= small { (big, small) } else { (small, big) };
        [Complex64::new(lo, 0.0), Complex64::new(hi, 0.0)]
    } else {
        let im = (-disc).sqrt();
        [Complex64::new(half_tr, -im), Complex64::new(half_tr, im)]
    }
}
