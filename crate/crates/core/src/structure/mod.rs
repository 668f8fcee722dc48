//! Algebraic structure of EABP multiplication tables: linear forms and
//! closed sets, one-dimensional subalgebras, ideals, derived algebras,
//! quotients and the 2×2 change of basis.
//!
//! Everything is generic over [`Scalar`]; with [`crate::Rational`] tables all
//! rank and membership decisions are exact.

mod basis_change;
mod forms;
mod ideal;
mod quotient;
mod span;

use crate::algebra::{multiply, AlgebraElement, MultiplicationTable};
use crate::scalar::Scalar;

pub use basis_change::{basis_change_params, transform_table, BasisChange2x2, BasisChangeReport};
pub use forms::{closure_check, forms_xy, one_dim_classify, ClosureReport, ClosureSet, Forms, OneDimClass};
pub use ideal::{
    derived_dims, hypothesis_sweep, ideal_closure, ideal_witness, is_ideal, one_dim_ideal_search,
    product_chain, DerivedDims, IdealWitness, SweepReport,
};
pub use quotient::{
    classify_quotient_ideal, presented_quotient_table, quotient, reduce_products, Anchor,
    QuotientAlgebra, QuotientIdealClass,
};
pub use span::LinearSpan;

/// Product of two coordinate vectors under `tab`.
pub(crate) fn mul<S: Scalar>(tab: &MultiplicationTable<S>, u: &[S], v: &[S]) -> Vec<S> {
    let split = tab.split();
    let a = AlgebraElement::from_coords(split, u.to_vec());
    let b = AlgebraElement::from_coords(split, v.to_vec());
    multiply(&a, &b, tab).expect("vectors sized to the table").into_coords()
}

/// Standard basis vector `e_index` of length `dim`.
pub(crate) fn unit<S: Scalar>(dim: usize, index: usize) -> Vec<S> {
    let mut v = vec![S::zero(); dim];
    v[index] = S::one();
    v
}
