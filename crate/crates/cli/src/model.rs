use eabp::algebra::{
    constrained_tensor, hard_params, table_2x2, table_from_tensor, InheritanceTensor, MultiplicationTable,
    StochasticPair, TwoByTwoParams,
};
use eabp::dynamics::Operator;
use eabp::Rational;
use serde::Serialize;

use crate::config::ModelSpec;
use crate::error::Result;
use crate::render::RationalRepr;

/// A validated model with exact coefficients.
#[derive(Debug, Clone)]
pub enum Model {
    Hard { n: usize, nu: usize },
    TwoByTwo(TwoByTwoParams<Rational>),
    Pair(StochasticPair<Rational>),
    Tensor(InheritanceTensor<Rational>),
}

/// How a model is echoed in the output.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelEcho {
    Hard { n: usize, nu: usize },
    #[serde(rename = "2x2")]
    TwoByTwo { a: RationalRepr, b: RationalRepr, c: RationalRepr, d: RationalRepr },
    StochasticPair { a: Vec<Vec<RationalRepr>>, b: Vec<Vec<RationalRepr>> },
    Tensor { n: usize, nu: usize },
}

fn matrix(rows: &[Vec<crate::config::Num>]) -> Result<Vec<Vec<Rational>>> {
    rows.iter().map(|r| r.iter().map(|v| v.rational()).collect()).collect()
}

impl Model {
    pub fn from_spec(spec: &ModelSpec) -> Result<Self> {
        Ok(match spec {
            ModelSpec::Hard { n, nu } => {
                if *n == 0 || *nu == 0 {
                    return Err(eabp::Error::Precondition(format!("hard model needs n, nu ≥ 1, got {n},{nu}")).into());
                }
                Model::Hard { n: *n, nu: *nu }
            }
            ModelSpec::TwoByTwo { a, b, c, d } => {
                Model::TwoByTwo(TwoByTwoParams::new(a.rational()?, b.rational()?, c.rational()?, d.rational()?)?)
            }
            ModelSpec::StochasticPair { a, b } => Model::Pair(StochasticPair::new(matrix(a)?, matrix(b)?)?),
            ModelSpec::Tensor { n, nu, pf, pm } => {
                let cube = |c: &[Vec<Vec<crate::config::Num>>]| -> Result<Vec<Vec<Vec<Rational>>>> {
                    c.iter().map(|m| matrix(m)).collect()
                };
                Model::Tensor(InheritanceTensor::from_nested(*n, *nu, cube(pf)?, cube(pm)?)?.validated()?)
            }
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            Model::Hard { n, nu } => (*n, *nu),
            Model::TwoByTwo(_) => (2, 2),
            Model::Pair(p) => (p.n(), p.nu()),
            Model::Tensor(t) => (t.n(), t.nu()),
        }
    }

    /// `a = c` and `b = d`.
    pub fn is_symmetric_2x2(&self) -> bool {
        matches!(self, Model::TwoByTwo(p) if p.a == p.c && p.b == p.d)
    }

    pub fn operator(&self) -> Result<Operator> {
        Ok(match self {
            Model::Hard { n, nu } => Operator::hard(*n, *nu)?,
            Model::TwoByTwo(p) => Operator::two_by_two(p.to_f64())?,
            Model::Pair(p) => Operator::general(constrained_tensor(p)?.to_f64())?,
            Model::Tensor(t) => Operator::general(t.to_f64())?,
        })
    }

    pub fn table(&self) -> Result<MultiplicationTable<Rational>> {
        Ok(match self {
            Model::Hard { n, nu } => table_from_tensor(&constrained_tensor(&hard_params::<Rational>(*n, *nu))?),
            Model::TwoByTwo(p) => table_2x2(p),
            Model::Pair(p) => table_from_tensor(&constrained_tensor(p)?),
            Model::Tensor(t) => table_from_tensor(t),
        })
    }

    pub fn echo(&self) -> ModelEcho {
        let m = |rows: &[Vec<Rational>]| -> Vec<Vec<RationalRepr>> {
            rows.iter().map(|r| r.iter().map(RationalRepr::from).collect()).collect()
        };
        match self {
            Model::Hard { n, nu } => ModelEcho::Hard { n: *n, nu: *nu },
            Model::TwoByTwo(p) => ModelEcho::TwoByTwo {
                a: (&p.a).into(),
                b: (&p.b).into(),
                c: (&p.c).into(),
                d: (&p.d).into(),
            },
            Model::Pair(p) => ModelEcho::StochasticPair { a: m(&p.a), b: m(&p.b) },
            Model::Tensor(t) => ModelEcho::Tensor { n: t.n(), nu: t.nu() },
        }
    }
}
