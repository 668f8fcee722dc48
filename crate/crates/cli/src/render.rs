use std::fmt::Write as _;

use eabp::algebra::MultiplicationTable;
use eabp::dynamics::PopulationState;
use eabp::Rational;
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

/// An exact rational emitted as `[numerator, denominator]`. Parts that do not
/// fit in an `i64` are written as decimal strings.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalRepr(pub Rational);

impl From<&Rational> for RationalRepr {
    fn from(r: &Rational) -> Self {
        RationalRepr(r.clone())
    }
}

impl Serialize for RationalRepr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        for part in [self.0.numer(), self.0.denom()] {
            match i64::try_from(part) {
                Ok(v) => t.serialize_element(&v)?,
                Err(_) => t.serialize_element(&part.to_string())?,
            }
        }
        t.end()
    }
}

pub fn vector(v: &[Rational]) -> Vec<RationalRepr> {
    v.iter().map(RationalRepr::from).collect()
}

/// A multiplication table as `products[u][v]` = coordinates of `e_u e_v`.
#[derive(Debug, Clone, Serialize)]
pub struct TableRepr {
    pub labels: Vec<String>,
    pub products: Vec<Vec<Vec<RationalRepr>>>,
}

impl From<&MultiplicationTable<Rational>> for TableRepr {
    fn from(t: &MultiplicationTable<Rational>) -> Self {
        let d = t.dim();
        TableRepr {
            labels: t.basis().iter().map(ToString::to_string).collect(),
            products: (0..d).map(|u| (0..d).map(|v| vector(t.product_of_basis(u, v))).collect()).collect(),
        }
    }
}

/// CSV with a `step` (or index) column followed by the state coordinates.
pub fn state_csv<'a>(n: usize, nu: usize, rows: impl IntoIterator<Item = (usize, &'a PopulationState)>) -> String {
    let mut out = String::from("step");
    for i in 1..=n {
        write!(out, ",x_{i}").unwrap();
    }
    for k in 1..=nu {
        write!(out, ",y_{k}").unwrap();
    }
    out.push('\n');
    for (step, z) in rows {
        write!(out, "{step}").unwrap();
        for v in z.x().iter().chain(z.y()) {
            write!(out, ",{v:.16e}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn float_field(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.16e}")).unwrap_or_default()
}
