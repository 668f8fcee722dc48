use serde::Serialize;

use crate::algebra::{BasisLabel, MultiplicationTable, Sex};
use crate::error::Error;
use crate::linalg::coordinates;
use crate::scalar::Scalar;

use super::ideal::{ideal_witness, is_ideal};
use super::{mul, unit, LinearSpan};

/// Which sex keeps its type-1 basis vector in the quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchor {
    /// Basis `ē_1^(f), …, ē_n^(f), ē_2^(m), …, ē_ν^(m)`.
    Female,
    /// Basis `ē_2^(f), …, ē_n^(f), ē_1^(m), …, ē_ν^(m)`.
    Male,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientAlgebra<S> {
    pub parent: MultiplicationTable<S>,
    pub ideal: LinearSpan<S>,
    pub table: MultiplicationTable<S>,
    /// Parent coordinates of the coset representatives, in `table` order.
    pub representatives: Vec<Vec<S>>,
}

/// Representatives by greedy selection of standard basis vectors (anchor
/// sex first) that are independent modulo `ideal`; returned females first.
fn representatives<S: Scalar>(
    tab: &MultiplicationTable<S>,
    ideal: &LinearSpan<S>,
    anchor: Anchor,
) -> Vec<(BasisLabel, Vec<S>)> {
    let d = tab.dim();
    let first = match anchor {
        Anchor::Female => Sex::Female,
        Anchor::Male => Sex::Male,
    };
    let mut order: Vec<usize> = (0..d).filter(|&u| tab.basis()[u].sex == first).collect();
    order.extend((0..d).filter(|&u| tab.basis()[u].sex != first));
    let mut span = ideal.clone();
    let mut chosen = Vec::new();
    for u in order {
        let e = unit::<S>(d, u);
        if !span.contains(&e) {
            span = span.extended(std::slice::from_ref(&e));
            chosen.push(u);
        }
    }
    chosen.sort_unstable();
    chosen.into_iter().map(|u| (tab.basis()[u], unit(d, u))).collect()
}

/// Lift–multiply–reduce without checking that `ideal` is an ideal. When it
/// is not, the result depends on the representatives and is not an algebra
/// structure on the quotient space.
pub fn reduce_products<S: Scalar>(
    tab: &MultiplicationTable<S>,
    ideal: &LinearSpan<S>,
    anchor: Anchor,
) -> QuotientAlgebra<S> {
    let reps = representatives(tab, ideal, anchor);
    let k = reps.len();
    let mut solve_basis: Vec<Vec<S>> = reps.iter().map(|(_, v)| v.clone()).collect();
    solve_basis.extend(ideal.basis().iter().cloned());
    let labels: Vec<BasisLabel> = reps.iter().map(|(l, _)| *l).collect();
    let table = MultiplicationTable::from_products(labels, |i, j| {
        let p = mul(tab, &reps[i].1, &reps[j].1);
        let c = coordinates(&solve_basis, &p).expect("representatives and ideal span the space");
        c.into_iter().take(k).collect()
    });
    QuotientAlgebra {
        parent: tab.clone(),
        ideal: ideal.clone(),
        table,
        representatives: reps.into_iter().map(|(_, v)| v).collect(),
    }
}

/// The quotient algebra `B / I`.
pub fn quotient<S: Scalar>(
    tab: &MultiplicationTable<S>,
    ideal: &LinearSpan<S>,
    anchor: Anchor,
) -> Result<QuotientAlgebra<S>, Error> {
    if let Some(w) = ideal_witness(ideal, tab) {
        return Err(Error::NotAnIdeal(format!(
            "generator {} times {} = {:?} leaves the span",
            w.generator,
            tab.basis()[w.basis_index],
            w.product.iter().map(ToString::to_string).collect::<Vec<_>>()
        )));
    }
    Ok(reduce_products(tab, ideal, anchor))
}

/// The quotient table as presented in closed form. For the female anchor,
/// `ē_i^(f) ē_1^(f) = ½(ē_1^(f) − ē_i^(f))` and
/// `ē_k^(m) ē_1^(f) = ½(ē_1^(f) + ē_k^(m))` for `i, k ≥ 2`, all other products
/// zero; the male anchor exchanges the roles of the sexes.
pub fn presented_quotient_table<S: Scalar>(n: usize, nu: usize, anchor: Anchor) -> MultiplicationTable<S> {
    let labels: Vec<BasisLabel> = match anchor {
        Anchor::Female => (0..n).map(BasisLabel::female).chain((1..nu).map(BasisLabel::male)).collect(),
        Anchor::Male => (1..n).map(BasisLabel::female).chain((0..nu).map(BasisLabel::male)).collect(),
    };
    let anchor_sex = match anchor {
        Anchor::Female => Sex::Female,
        Anchor::Male => Sex::Male,
    };
    let d = labels.len();
    let a = labels
        .iter()
        .position(|l| l.sex == anchor_sex && l.index == 0)
        .expect("anchor label present");
    let half = S::half();
    let mut table = MultiplicationTable::zero(labels.clone());
    for (u, label) in labels.iter().enumerate() {
        if u == a {
            continue;
        }
        let mut v = vec![S::zero(); d];
        v[a] = half.clone();
        v[u] = if label.sex == anchor_sex { -half.clone() } else { half.clone() };
        table.set_product(u, a, &v);
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientIdealClass {
    /// The whole quotient algebra.
    Whole,
    /// `⟨ē_1 − ē_i (same sex as the anchor), ē_1 + ē_j (other sex)⟩`.
    FamilyA,
    /// An ideal inside `{Σ a_i ē_i + Σ b_j ē_j : i, j ≥ 2, Σ a_i = Σ b_j = 0}`.
    FamilyB,
    NotIdeal,
    /// An ideal that is neither of the above.
    Unclassified,
}

/// Places `span` among the ideal families of a quotient table whose basis
/// contains exactly one index-0 (anchor) label.
pub fn classify_quotient_ideal<S: Scalar>(
    span: &LinearSpan<S>,
    table: &MultiplicationTable<S>,
) -> Result<QuotientIdealClass, Error> {
    let d = table.dim();
    if span.ambient() != d {
        return Err(Error::Dimension { expected: d, found: span.ambient() });
    }
    let anchors: Vec<usize> = (0..d).filter(|&u| table.basis()[u].index == 0).collect();
    let [a] = anchors[..] else {
        return Err(Error::Precondition("quotient basis must contain exactly one type-1 label".into()));
    };
    if !is_ideal(span, table) {
        return Ok(QuotientIdealClass::NotIdeal);
    }
    if span.is_full() {
        return Ok(QuotientIdealClass::Whole);
    }
    let anchor_sex = table.basis()[a].sex;
    let family_a: Vec<Vec<S>> = (0..d)
        .filter(|&u| u != a)
        .map(|u| {
            let mut v = vec![S::zero(); d];
            v[a] = S::one();
            v[u] = if table.basis()[u].sex == anchor_sex { -S::one() } else { S::one() };
            v
        })
        .collect();
    if span.same_as(&LinearSpan::new(d, &family_a)) {
        return Ok(QuotientIdealClass::FamilyA);
    }
    let in_family_b = span.basis().iter().all(|v| {
        let sum_over = |same: bool| {
            (0..d)
                .filter(|&u| u != a && (table.basis()[u].sex == anchor_sex) == same)
                .fold(S::zero(), |acc, u| acc + v[u].clone())
        };
        v[a].is_negligible() && sum_over(true).is_negligible() && sum_over(false).is_negligible()
    });
    Ok(if in_family_b { QuotientIdealClass::FamilyB } else { QuotientIdealClass::Unclassified })
}
