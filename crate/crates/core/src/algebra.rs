//! Inheritance tensors, their constrained parameterisations, and the
//! commutative algebras they define.
//!
//! Basis ordering is fixed across the crate: female basis vectors
//! `e_0^(f) … e_{n-1}^(f)` come first, followed by the male vectors
//! `e_0^(m) … e_{ν-1}^(m)`. Indices are zero-based, so "type 1" of the
//! population is index `0`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::Scalar;

/// Row-sum tolerance for float tensors and stochastic matrices.
pub const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sex {
    Female,
    Male,
}

impl Sex {
    pub fn symbol(self) -> char {
        match self {
            Sex::Female => 'f',
            Sex::Male => 'm',
        }
    }
}

/// Names one basis vector of an algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisLabel {
    pub sex: Sex,
    pub index: usize,
}

impl BasisLabel {
    pub fn female(index: usize) -> Self {
        Self { sex: Sex::Female, index }
    }

    pub fn male(index: usize) -> Self {
        Self { sex: Sex::Male, index }
    }
}

impl fmt::Display for BasisLabel {
    // One-based in human-readable output, matching the usual e_1^(f) naming.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}^({})", self.index + 1, self.sex.symbol())
    }
}

/// Standard EABP basis labels for `n` female and `nu` male types.
pub fn standard_basis(n: usize, nu: usize) -> Vec<BasisLabel> {
    (0..n)
        .map(BasisLabel::female)
        .chain((0..nu).map(BasisLabel::male))
        .collect()
}

/// A constraint broken by an inheritance tensor or stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NegativeEntry { sex: Sex, parents: (usize, usize), offspring: usize, value: f64 },
    RowSum { sex: Sex, parents: (usize, usize), sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeEntry { sex, parents: (i, k), offspring, value } => write!(
                f,
                "negative {} coefficient {value} at ({},{}) -> {}",
                sex.symbol(),
                i + 1,
                k + 1,
                offspring + 1
            ),
            Violation::RowSum { sex, parents: (i, k), sum } => {
                write!(f, "{} row sum {sum} at ({},{})", sex.symbol(), i + 1, k + 1)
            }
        }
    }
}

/// Inheritance coefficients `P^(f)_{ik,j}` and `P^(m)_{ik,l}`.
///
/// Construction only checks shapes; use [`validate_tensor`] (or
/// [`InheritanceTensor::validated`]) for the probability constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct InheritanceTensor<S> {
    n: usize,
    nu: usize,
    pf: Vec<S>,
    pm: Vec<S>,
}

impl<S: Scalar> InheritanceTensor<S> {
    /// Builds a tensor from nested arrays `pf[i][k][j]` and `pm[i][k][l]`.
    pub fn from_nested(
        n: usize,
        nu: usize,
        pf: Vec<Vec<Vec<S>>>,
        pm: Vec<Vec<Vec<S>>>,
    ) -> Result<Self, Error> {
        if n == 0 || nu == 0 {
            return Err(Error::Shape(format!("n = {n}, nu = {nu} must both be positive")));
        }
        let flat_pf = flatten(&pf, n, nu, n, "pf")?;
        let flat_pm = flatten(&pm, n, nu, nu, "pm")?;
        Ok(Self { n, nu, pf: flat_pf, pm: flat_pm })
    }

    /// Builds a tensor from coefficient functions.
    pub fn from_fn(
        n: usize,
        nu: usize,
        mut female: impl FnMut(usize, usize, usize) -> S,
        mut male: impl FnMut(usize, usize, usize) -> S,
    ) -> Self {
        assert!(n > 0 && nu > 0, "population needs at least one type of each sex");
        let mut pf = Vec::with_capacity(n * nu * n);
        let mut pm = Vec::with_capacity(n * nu * nu);
        for i in 0..n {
            for k in 0..nu {
                pf.extend((0..n).map(|j| female(i, k, j)));
                pm.extend((0..nu).map(|l| male(i, k, l)));
            }
        }
        Self { n, nu, pf, pm }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    /// `P^(f)_{ik,j}`: probability of a type-`j` daughter from parents `(i, k)`.
    pub fn pf(&self, i: usize, k: usize, j: usize) -> &S {
        &self.pf[(i * self.nu + k) * self.n + j]
    }

    /// `P^(m)_{ik,l}`: probability of a type-`l` son from parents `(i, k)`.
    pub fn pm(&self, i: usize, k: usize, l: usize) -> &S {
        &self.pm[(i * self.nu + k) * self.nu + l]
    }

    pub fn female_row(&self, i: usize, k: usize) -> &[S] {
        let start = (i * self.nu + k) * self.n;
        &self.pf[start..start + self.n]
    }

    pub fn male_row(&self, i: usize, k: usize) -> &[S] {
        let start = (i * self.nu + k) * self.nu;
        &self.pm[start..start + self.nu]
    }

    pub fn validated(self) -> Result<Self, Error> {
        let violations = validate_tensor(&self);
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidTensor(violations))
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> InheritanceTensor<T> {
        InheritanceTensor {
            n: self.n,
            nu: self.nu,
            pf: self.pf.iter().map(&f).collect(),
            pm: self.pm.iter().map(&f).collect(),
        }
    }

    pub fn to_f64(&self) -> InheritanceTensor<f64> {
        self.map(Scalar::to_f64)
    }
}

fn flatten<S: Clone>(
    nested: &[Vec<Vec<S>>],
    n: usize,
    nu: usize,
    out: usize,
    name: &str,
) -> Result<Vec<S>, Error> {
    if nested.len() != n {
        return Err(Error::Shape(format!("{name} has {} outer entries, expected {n}", nested.len())));
    }
    let mut flat = Vec::with_capacity(n * nu * out);
    for (i, by_k) in nested.iter().enumerate() {
        if by_k.len() != nu {
            return Err(Error::Shape(format!(
                "{name}[{i}] has {} entries, expected {nu}",
                by_k.len()
            )));
        }
        for (k, row) in by_k.iter().enumerate() {
            if row.len() != out {
                return Err(Error::Shape(format!(
                    "{name}[{i}][{k}] has {} entries, expected {out}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
    }
    Ok(flat)
}

/// Lists every broken constraint of `t` (empty when valid).
pub fn validate_tensor<S: Scalar>(t: &InheritanceTensor<S>) -> Vec<Violation> {
    let mut out = Vec::new();
    for i in 0..t.n {
        for k in 0..t.nu {
            check_row(t.female_row(i, k), Sex::Female, (i, k), &mut out);
            check_row(t.male_row(i, k), Sex::Male, (i, k), &mut out);
        }
    }
    out
}

fn check_row<S: Scalar>(row: &[S], sex: Sex, parents: (usize, usize), out: &mut Vec<Violation>) {
    for (j, v) in row.iter().enumerate() {
        if v.is_negative() {
            out.push(Violation::NegativeEntry { sex, parents, offspring: j, value: v.to_f64() });
        }
    }
    let sum = row.iter().cloned().fold(S::zero(), |acc, v| acc + v);
    if !sum.near(&S::one(), ROW_SUM_TOL) {
        out.push(Violation::RowSum { sex, parents, sum: sum.to_f64() });
    }
}

/// A pair of row-stochastic matrices `A` (n×n) and `B` (ν×ν).
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticPair<S> {
    pub a: Vec<Vec<S>>,
    pub b: Vec<Vec<S>>,
}

impl<S: Scalar> StochasticPair<S> {
    pub fn new(a: Vec<Vec<S>>, b: Vec<Vec<S>>) -> Result<Self, Error> {
        check_stochastic(&a, "A")?;
        check_stochastic(&b, "B")?;
        Ok(Self { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn nu(&self) -> usize {
        self.b.len()
    }
}

fn check_stochastic<S: Scalar>(m: &[Vec<S>], name: &str) -> Result<(), Error> {
    if m.is_empty() {
        return Err(Error::InvalidStochastic(format!("{name} is empty")));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != m.len() {
            return Err(Error::InvalidStochastic(format!(
                "{name} row {} has {} entries, expected {}",
                i + 1,
                row.len(),
                m.len()
            )));
        }
        if let Some(v) = row.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidStochastic(format!("{name} row {} has negative entry {v}", i + 1)));
        }
        let sum = row.iter().cloned().fold(S::zero(), |acc, v| acc + v);
        if !sum.near(&S::one(), ROW_SUM_TOL) {
            return Err(Error::InvalidStochastic(format!("{name} row {} sums to {sum}", i + 1)));
        }
    }
    Ok(())
}

/// The four free parameters of the `n = ν = 2` constrained model:
/// `a = a₁₂`, `b = a₂₂`, `c = b₁₂`, `d = b₂₂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoByTwoParams<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Scalar> TwoByTwoParams<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Result<Self, Error> {
        for (name, v) in [("a", &a), ("b", &b), ("c", &c), ("d", &d)] {
            if v.is_negative() || (v.clone() - S::one()).to_f64() > 0.0 {
                return Err(Error::ParameterRange { name, value: v.to_f64() });
            }
        }
        Ok(Self { a, b, c, d })
    }

    /// `A = [[1−a, a], [1−b, b]]`, `B = [[1−c, c], [1−d, d]]`.
    pub fn stochastic_pair(&self) -> StochasticPair<S> {
        let one = S::one;
        StochasticPair {
            a: vec![
                vec![one() - self.a.clone(), self.a.clone()],
                vec![one() - self.b.clone(), self.b.clone()],
            ],
            b: vec![
                vec![one() - self.c.clone(), self.c.clone()],
                vec![one() - self.d.clone(), self.d.clone()],
            ],
        }
    }

    pub fn to_f64(&self) -> TwoByTwoParams<f64> {
        TwoByTwoParams {
            a: self.a.to_f64(),
            b: self.b.to_f64(),
            c: self.c.to_f64(),
            d: self.d.to_f64(),
        }
    }
}

/// Inheritance tensor in which type 1 of each sex is preferred: a father
/// (mother) of type ≠ 1 only produces type-1 daughters (sons).
pub fn constrained_tensor<S: Scalar>(sp: &StochasticPair<S>) -> Result<InheritanceTensor<S>, Error> {
    check_stochastic(&sp.a, "A")?;
    check_stochastic(&sp.b, "B")?;
    let (n, nu) = (sp.n(), sp.nu());
    let indicator = |hit: bool| if hit { S::one() } else { S::zero() };
    Ok(InheritanceTensor::from_fn(
        n,
        nu,
        |i, k, j| if k == 0 { sp.a[i][j].clone() } else { indicator(j == 0) },
        |i, k, l| if i == 0 { sp.b[k][l].clone() } else { indicator(l == 0) },
    ))
}

/// Identity matrices: the hard constraint.
pub fn hard_params<S: Scalar>(n: usize, nu: usize) -> StochasticPair<S> {
    let identity = |size: usize| {
        (0..size)
            .map(|i| (0..size).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect()
    };
    StochasticPair { a: identity(n), b: identity(nu) }
}

/// An element of ℝ^{n+ν} (or of a quotient), split into a female part of
/// length `split` and a male part.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<S> {
    split: usize,
    coords: Vec<S>,
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn new(xs: Vec<S>, ys: Vec<S>) -> Self {
        let split = xs.len();
        let mut coords = xs;
        coords.extend(ys);
        Self { split, coords }
    }

    pub fn from_coords(split: usize, coords: Vec<S>) -> Self {
        assert!(split <= coords.len());
        Self { split, coords }
    }

    pub fn zero(n: usize, nu: usize) -> Self {
        Self { split: n, coords: vec![S::zero(); n + nu] }
    }

    /// Basis vector `e_index` of a space with `split` female coordinates.
    pub fn basis(split: usize, dim: usize, index: usize) -> Self {
        let mut coords = vec![S::zero(); dim];
        coords[index] = S::one();
        Self { split, coords }
    }

    pub fn xs(&self) -> &[S] {
        &self.coords[..self.split]
    }

    pub fn ys(&self) -> &[S] {
        &self.coords[self.split..]
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_negligible)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { split: self.split, coords: self.coords.iter().map(|v| v.clone() * c.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() + b.clone()).collect();
        Self { split: self.split, coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() - b.clone()).collect();
        Self { split: self.split, coords }
    }

    pub fn to_f64(&self) -> AlgebraElement<f64> {
        AlgebraElement { split: self.split, coords: self.coords.iter().map(Scalar::to_f64).collect() }
    }

    /// Coordinatewise equality under [`Scalar::near`].
    pub fn near(&self, other: &Self, tol: f64) -> bool {
        self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| a.near(b, tol))
    }
}

/// Structure constants `c[u][v][w]`: `e_u e_v = Σ_w c[u][v][w] e_w`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicationTable<S> {
    basis: Vec<BasisLabel>,
    constants: Vec<S>,
}

impl<S: Scalar> MultiplicationTable<S> {
    pub fn zero(basis: Vec<BasisLabel>) -> Self {
        let dim = basis.len();
        Self { basis, constants: vec![S::zero(); dim * dim * dim] }
    }

    /// Builds a table from products of basis pairs, symmetrising as it goes.
    /// `product(u, v)` is only called for `u <= v`.
    pub fn from_products(basis: Vec<BasisLabel>, mut product: impl FnMut(usize, usize) -> Vec<S>) -> Self {
        let mut table = Self::zero(basis);
        let dim = table.dim();
        for u in 0..dim {
            for v in u..dim {
                let p = product(u, v);
                assert_eq!(p.len(), dim, "product vector has wrong length");
                table.set_product(u, v, &p);
            }
        }
        table
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    /// Number of female basis vectors (they come first).
    pub fn split(&self) -> usize {
        self.basis.iter().take_while(|b| b.sex == Sex::Female).count()
    }

    pub fn constant(&self, u: usize, v: usize, w: usize) -> &S {
        let d = self.dim();
        &self.constants[(u * d + v) * d + w]
    }

    /// Coordinates of `e_u e_v`.
    pub fn product_of_basis(&self, u: usize, v: usize) -> &[S] {
        let d = self.dim();
        &self.constants[(u * d + v) * d..(u * d + v + 1) * d]
    }

    /// Sets `e_u e_v` and `e_v e_u`.
    pub fn set_product(&mut self, u: usize, v: usize, coords: &[S]) {
        let d = self.dim();
        for (w, c) in coords.iter().enumerate() {
            self.constants[(u * d + v) * d + w] = c.clone();
            self.constants[(v * d + u) * d + w] = c.clone();
        }
    }

    pub fn index_of(&self, label: BasisLabel) -> Option<usize> {
        self.basis.iter().position(|b| *b == label)
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|u| (0..d).all(|v| self.product_of_basis(u, v) == self.product_of_basis(v, u)))
    }

    /// Whether every product of two same-sex basis vectors vanishes.
    pub fn same_sex_products_vanish(&self) -> bool {
        let d = self.dim();
        (0..d).all(|u| {
            (0..d).all(|v| {
                self.basis[u].sex != self.basis[v].sex
                    || self.product_of_basis(u, v).iter().all(Zero::is_zero)
            })
        })
    }

    pub fn to_f64(&self) -> MultiplicationTable<f64> {
        MultiplicationTable {
            basis: self.basis.clone(),
            constants: self.constants.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MultiplicationTable<T> {
        MultiplicationTable { basis: self.basis.clone(), constants: self.constants.iter().map(f).collect() }
    }
}

/// The EABP table of an inheritance tensor:
/// `e_i^(f) e_k^(m) = ½ (Σ_j P^(f)_{ik,j} e_j^(f) + Σ_l P^(m)_{ik,l} e_l^(m))`,
/// same-sex products zero.
pub fn table_from_tensor<S: Scalar>(t: &InheritanceTensor<S>) -> MultiplicationTable<S> {
    let (n, nu) = (t.n(), t.nu());
    let mut table = MultiplicationTable::zero(standard_basis(n, nu));
    let half = S::half();
    for i in 0..n {
        for k in 0..nu {
            let coords: Vec<S> = t
                .female_row(i, k)
                .iter()
                .chain(t.male_row(i, k))
                .map(|p| half.clone() * p.clone())
                .collect();
            table.set_product(i, n + k, &coords);
        }
    }
    table
}

/// The four-dimensional table written directly in terms of `(a, b, c, d)`.
pub fn table_2x2<S: Scalar>(p: &TwoByTwoParams<S>) -> MultiplicationTable<S> {
    let h = S::half();
    let one = S::one;
    let zero = S::zero;
    let scaled = |v: [S; 4]| v.into_iter().map(|x| h.clone() * x).collect::<Vec<S>>();
    let mut table = MultiplicationTable::zero(standard_basis(2, 2));
    // basis order: f1, f2, m1, m2
    table.set_product(
        0,
        2,
        &scaled([one() - p.a.clone(), p.a.clone(), one() - p.c.clone(), p.c.clone()]),
    );
    table.set_product(1, 2, &scaled([one() - p.b.clone(), p.b.clone(), one(), zero()]));
    table.set_product(0, 3, &scaled([one(), zero(), one() - p.d.clone(), p.d.clone()]));
    table.set_product(1, 3, &scaled([one(), zero(), one(), zero()]));
    table
}

/// Bilinear product `z t = Σ_{u,v} z_u t_v e_u e_v`.
pub fn multiply<S: Scalar>(
    z: &AlgebraElement<S>,
    t: &AlgebraElement<S>,
    tab: &MultiplicationTable<S>,
) -> Result<AlgebraElement<S>, Error> {
    let d = tab.dim();
    for found in [z.dim(), t.dim()] {
        if found != d {
            return Err(Error::Dimension { expected: d, found });
        }
    }
    let mut out = vec![S::zero(); d];
    for (u, zu) in z.coords().iter().enumerate() {
        if zu.is_zero() {
            continue;
        }
        for (v, tv) in t.coords().iter().enumerate() {
            if tv.is_zero() {
                continue;
            }
            let w = zu.clone() * tv.clone();
            for (o, c) in out.iter_mut().zip(tab.product_of_basis(u, v)) {
                if !c.is_zero() {
                    *o = o.clone() + w.clone() * c.clone();
                }
            }
        }
    }
    Ok(AlgebraElement { split: tab.split(), coords: out })
}
