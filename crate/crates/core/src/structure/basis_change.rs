use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{table_2x2, MultiplicationTable, TwoByTwoParams};
use crate::error::Error;
use crate::linalg::coordinates;

use super::mul;

const FIT_TOL: f64 = 1e-9;

/// Sex-preserving change of basis of the 2×2 algebra:
/// `f1' = A1 f1 + A2 f2`, `f2' = B1 f1 + B2 f2`,
/// `m1' = C1 m1 + C2 m2`, `m2' = D1 m1 + D2 m2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisChange2x2 {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
}

impl BasisChange2x2 {
    pub fn identity() -> Self {
        Self { a1: 1.0, a2: 0.0, b1: 0.0, b2: 1.0, c1: 1.0, c2: 0.0, d1: 0.0, d2: 1.0 }
    }

    pub fn det_female(&self) -> f64 {
        self.a1 * self.b2 - self.a2 * self.b1
    }

    pub fn det_male(&self) -> f64 {
        self.c1 * self.d2 - self.c2 * self.d1
    }

    /// Old-basis coordinates of the new basis vectors `f1', f2', m1', m2'`.
    fn new_basis(&self) -> Vec<Vec<f64>> {
        vec![
            vec![self.a1, self.a2, 0.0, 0.0],
            vec![self.b1, self.b2, 0.0, 0.0],
            vec![0.0, 0.0, self.c1, self.c2],
            vec![0.0, 0.0, self.d1, self.d2],
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisChangeReport {
    /// `(a', b', c', d')` from the closed-form relations.
    pub formulas: TwoByTwoParams<f64>,
    /// Least-squares fit of the transformed table to the 2×2 template.
    pub fit: TwoByTwoParams<f64>,
    /// Largest entrywise deviation of the transformed table from the fitted template.
    pub fit_residual: f64,
    pub fit_succeeds: bool,
    pub formulas_match: bool,
    /// The fit equals the formulas with female and male parameters exchanged.
    pub swapped_match: bool,
    pub discrepancies: Vec<String>,
}

/// Structure constants of `tab` in the basis `bc`.
pub fn transform_table(tab: &MultiplicationTable<f64>, bc: &BasisChange2x2) -> Result<MultiplicationTable<f64>, Error> {
    if tab.dim() != 4 || tab.split() != 2 {
        return Err(Error::Precondition("basis change needs a 2+2 table".into()));
    }
    check_nondegenerate(bc)?;
    let basis = bc.new_basis();
    let mut out_err = None;
    let table = MultiplicationTable::from_products(tab.basis().to_vec(), |u, v| {
        let p = mul(tab, &basis[u], &basis[v]);
        coordinates(&basis, &p).unwrap_or_else(|| {
            out_err = Some(Error::DegenerateBasisChange("new basis does not span".into()));
            vec![0.0; 4]
        })
    });
    match out_err {
        Some(e) => Err(e),
        None => Ok(table),
    }
}

fn check_nondegenerate(bc: &BasisChange2x2) -> Result<(), Error> {
    let (da, dc) = (bc.det_female(), bc.det_male());
    if da == 0.0 || dc == 0.0 || !(da * dc).is_finite() {
        return Err(Error::DegenerateBasisChange(format!("A1B2−A2B1 = {da}, C1D2−C2D1 = {dc}")));
    }
    Ok(())
}

/// The closed-form `(a', b', c', d')`.
fn formulas(bc: &BasisChange2x2, p: &TwoByTwoParams<f64>) -> TwoByTwoParams<f64> {
    let BasisChange2x2 { a1, a2, b1, b2, c1, c2, d1, d2 } = *bc;
    let TwoByTwoParams { a, b, c, d } = *p;
    let da = bc.det_female();
    let dc = bc.det_male();
    TwoByTwoParams {
        a: (a1 + a2) * (c * a1 * c1 - a2 * c1 + d * a2 * c1 - a2 * c2) / da,
        b: (c * a1 * b1 * c1 - a2 * b1 * c1 + c * a2 * b1 * c1 + d * a1 * b2 * c1 - a2 * b2 * c1
            + d * a2 * b2 * c1
            - a2 * b1 * c2
            - a2 * b2 * c2)
            / da,
        c: (c1 + c2) * (a * a1 * c1 - a1 * c2 + b * a1 * c2 - a2 * c2) / dc,
        d: (a * a1 * c1 * d1 - a1 * c2 * d1 + a * a1 * c2 * d1 - a2 * c2 * d1 + b * a1 * c1 * d2
            - a1 * c2 * d2
            + b * a1 * c2 * d2
            - a2 * c2 * d2)
            / dc,
    }
}

/// Flattened upper-triangular products `(u, v)`, `u ≤ v`.
fn flatten(tab: &MultiplicationTable<f64>) -> Vec<f64> {
    (0..4)
        .flat_map(|u| (u..4).map(move |v| (u, v)))
        .flat_map(|(u, v)| tab.product_of_basis(u, v).to_vec())
        .collect()
}

/// Least-squares `(a, b, c, d)` for a table; the template is affine in them.
fn fit_template(target: &[f64]) -> (TwoByTwoParams<f64>, f64) {
    let zero = TwoByTwoParams { a: 0.0, b: 0.0, c: 0.0, d: 0.0 };
    let offset = flatten(&table_2x2(&zero));
    let columns: Vec<Vec<f64>> = (0..4)
        .map(|k| {
            let mut unit = [0.0; 4];
            unit[k] = 1.0;
            let p = TwoByTwoParams { a: unit[0], b: unit[1], c: unit[2], d: unit[3] };
            flatten(&table_2x2(&p)).iter().zip(&offset).map(|(t, o)| t - o).collect()
        })
        .collect();
    let rows = target.len();
    let m = DMatrix::from_fn(rows, 4, |r, k| columns[k][r]);
    let rhs = DVector::from_iterator(rows, target.iter().zip(&offset).map(|(t, o)| t - o));
    let sol = m.clone().svd(true, true).solve(&rhs, 1e-14).expect("SVD with both factors");
    let resid = (&m * &sol - &rhs).amax();
    (TwoByTwoParams { a: sol[0], b: sol[1], c: sol[2], d: sol[3] }, resid)
}

fn close(p: &TwoByTwoParams<f64>, q: &TwoByTwoParams<f64>) -> bool {
    let scale = 1.0 + [q.a, q.b, q.c, q.d].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    [(p.a, q.a), (p.b, q.b), (p.c, q.c), (p.d, q.d)]
        .iter()
        .all(|(x, y)| (x - y).abs() <= FIT_TOL * scale)
}

fn fmt(p: &TwoByTwoParams<f64>) -> String {
    format!("({:.6}, {:.6}, {:.6}, {:.6})", p.a, p.b, p.c, p.d)
}

/// Evaluates the closed-form parameter relations and cross-checks them
/// against a direct transform of `table_2x2(p)`. Disagreements are listed in
/// `discrepancies`; neither side is corrected.
pub fn basis_change_params(bc: &BasisChange2x2, p: &TwoByTwoParams<f64>) -> Result<BasisChangeReport, Error> {
    check_nondegenerate(bc)?;
    let formulas = formulas(bc, p);
    let transformed = transform_table(&table_2x2(p), bc)?;
    let (fit, fit_residual) = fit_template(&flatten(&transformed));
    let fit_succeeds = fit_residual <= FIT_TOL;
    let swapped = TwoByTwoParams { a: formulas.c, b: formulas.d, c: formulas.a, d: formulas.b };
    let formulas_match = fit_succeeds && close(&fit, &formulas);
    let swapped_match = fit_succeeds && close(&fit, &swapped);

    let mut discrepancies = Vec::new();
    if !fit_succeeds {
        discrepancies.push(format!(
            "transformed table is not of the 2x2 template form (residual {fit_residual:.3e}); \
             formulas give {}",
            fmt(&formulas)
        ));
    } else if !formulas_match {
        let note = if swapped_match { "; they agree after exchanging (a, b) with (c, d)" } else { "" };
        discrepancies.push(format!("formulas give {} but the table fit gives {}{note}", fmt(&formulas), fmt(&fit)));
    }
    Ok(BasisChangeReport { formulas, fit, fit_residual, fit_succeeds, formulas_match, swapped_match, discrepancies })
}
