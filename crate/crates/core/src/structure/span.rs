use crate::linalg::{in_span, independent_rows, rank, same_span};
use crate::scalar::Scalar;

/// A subspace given by generators; `basis` keeps an independent subset.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSpan<S> {
    ambient: usize,
    basis: Vec<Vec<S>>,
}

impl<S: Scalar> LinearSpan<S> {
    /// Span of `generators` in `ℝ^ambient`. Panics on length mismatch.
    pub fn new(ambient: usize, generators: &[Vec<S>]) -> Self {
        assert!(generators.iter().all(|g| g.len() == ambient), "generator length");
        Self { ambient, basis: independent_rows(generators) }
    }

    /// The zero subspace.
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new() }
    }

    /// The whole space.
    pub fn full(ambient: usize) -> Self {
        let rows: Vec<Vec<S>> = (0..ambient).map(|i| super::unit(ambient, i)).collect();
        Self { ambient, basis: rows }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        rank(&self.basis)
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn contains(&self, v: &[S]) -> bool {
        in_span(&self.basis, v)
    }

    pub fn contains_span(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Self) -> bool {
        same_span(&self.basis, &other.basis)
    }

    /// Span of `self ∪ extra`.
    pub fn extended(&self, extra: &[Vec<S>]) -> Self {
        let mut rows = self.basis.clone();
        rows.extend_from_slice(extra);
        Self::new(self.ambient, &rows)
    }

    pub fn to_f64(&self) -> LinearSpan<f64> {
        LinearSpan {
            ambient: self.ambient,
            basis: self.basis.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect(),
        }
    }
}
