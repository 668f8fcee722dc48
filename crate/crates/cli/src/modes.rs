use eabp::algebra::{BasisLabel, TwoByTwoParams};
use eabp::dynamics::{
    bernstein_check, classify, eigenvalues_at, fixed_point_symmetric, fixed_points_2x2, fixed_points_hard,
    fixed_points_numeric, fixed_points_symmetric, iterate, limit_hard, symmetric_limit, symmetric_threshold,
    two_periodic, BernsteinReport, FixedPointReport, LimitResult, PeriodicOrbit, PopulationState, Stability,
    SymmetricOutcome, Trajectory,
};
use eabp::structure::{
    closure_check, derived_dims, ideal_witness, is_ideal, one_dim_ideal_search, presented_quotient_table,
    quotient, reduce_products, hypothesis_sweep, Anchor, ClosureReport, ClosureSet, IdealWitness, LinearSpan,
};
use eabp::{Rational, Scalar};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Axes, Mode, RunConfig};
use crate::error::{CliError, Result};
use crate::model::Model;
use crate::render::{float_field, state_csv, vector, RationalRepr, TableRepr};

/// Random starts for the numeric fixed-point search on general tensors.
const NUMERIC_STARTS: usize = 64;
const IDEAL_RESTARTS: usize = 16;
const HYPOTHESIS_TRIALS: usize = 64;

/// The result of one mode: a JSON value and, where the mode has one, a CSV view.
pub struct ModeOutput {
    pub json: serde_json::Value,
    pub csv: Option<String>,
}

fn json<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| CliError::Validation(format!("cannot serialise result: {e}")))
}

fn model(cfg: &RunConfig) -> &Model {
    cfg.model.as_ref().expect("checked when the config was resolved")
}

fn state(cfg: &RunConfig) -> &PopulationState {
    cfg.initial_state.as_ref().expect("checked when the config was resolved")
}

fn rng(cfg: &RunConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed)
}

fn symmetric_params(m: &Model) -> Option<(f64, f64)> {
    match m {
        Model::TwoByTwo(p) if m.is_symmetric_2x2() => Some((p.a.to_f64(), p.b.to_f64())),
        _ => None,
    }
}

pub fn run_mode(cfg: &RunConfig) -> Result<ModeOutput> {
    match cfg.mode {
        Mode::Simulate => simulate(cfg),
        Mode::Fixpoints => fixpoints(cfg),
        Mode::Classify => classify_mode(cfg),
        Mode::Limit => limit(cfg),
        Mode::Periodic => periodic(cfg),
        Mode::Sweep => sweep(cfg),
        Mode::Structure => structure(cfg),
        Mode::Quotient => quotient_mode(cfg),
        Mode::Bernstein => bernstein(cfg),
    }
}

#[derive(Serialize)]
struct SimulateResult<'a> {
    n: usize,
    nu: usize,
    steps: usize,
    trajectory: &'a Trajectory,
}

fn simulate(cfg: &RunConfig) -> Result<ModeOutput> {
    let op = model(cfg).operator()?;
    let (n, nu) = op.dims();
    let traj = iterate(&op, state(cfg), cfg.max_steps, cfg.tol)?;
    let csv = state_csv(n, nu, traj.states.iter().enumerate());
    let result = SimulateResult { n, nu, steps: traj.states.len() - 1, trajectory: &traj };
    Ok(ModeOutput { json: json(&result)?, csv: Some(csv) })
}

fn fixed_point_report(cfg: &RunConfig) -> Result<FixedPointReport> {
    Ok(match model(cfg) {
        Model::Hard { n, nu } => fixed_points_hard(*n, *nu)?,
        Model::TwoByTwo(p) => fixed_points_2x2(&p.to_f64())?,
        m => fixed_points_numeric(&m.operator()?, NUMERIC_STARTS, &mut rng(cfg))?,
    })
}

fn fixpoints(cfg: &RunConfig) -> Result<ModeOutput> {
    let report = fixed_point_report(cfg)?;
    let (n, nu) = model(cfg).dims();
    let csv = state_csv(n, nu, report.points.iter().map(|p| &p.state).enumerate());
    Ok(ModeOutput { json: json(&report)?, csv: Some(csv) })
}

#[derive(Serialize)]
struct PointClass {
    state: PopulationState,
    eigenvalues: Vec<Complex64>,
    /// Absent when the reduced state space is a single point.
    class: Option<Stability>,
    /// `‖V(z) − z‖∞`; the classification describes a fixed point only when this is small.
    fixed_point_residual: f64,
}

#[derive(Serialize)]
struct ClassifyResult {
    point: Option<PointClass>,
    fixed_points: Option<FixedPointReport>,
}

fn classify_mode(cfg: &RunConfig) -> Result<ModeOutput> {
    let result = match &cfg.initial_state {
        Some(z) => {
            let op = model(cfg).operator()?;
            let eigenvalues = eigenvalues_at(&op, &z.reduced());
            let class = if eigenvalues.is_empty() { None } else { Some(classify(&eigenvalues)?) };
            let fixed_point_residual = op.apply(z)?.distance(z);
            ClassifyResult {
                point: Some(PointClass { state: z.clone(), eigenvalues, class, fixed_point_residual }),
                fixed_points: None,
            }
        }
        None => ClassifyResult { point: None, fixed_points: Some(fixed_point_report(cfg)?) },
    };
    Ok(ModeOutput { json: json(&result)?, csv: None })
}

#[derive(Serialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
enum LimitOutput {
    Hard {
        #[serde(flatten)]
        closed_form: LimitResult,
        /// Distance between the iterated state and the closed form when iteration stopped.
        iterated_distance: f64,
        iterated_steps: usize,
    },
    Symmetric {
        outcome: SymmetricOutcome,
    },
}

fn limit(cfg: &RunConfig) -> Result<ModeOutput> {
    let m = model(cfg);
    let z0 = state(cfg);
    let out = match m {
        Model::Hard { .. } => {
            let closed_form = limit_hard(z0);
            let traj = iterate(&m.operator()?, z0, cfg.max_steps, cfg.tol)?;
            LimitOutput::Hard {
                iterated_distance: traj.last().distance(&closed_form.limit),
                iterated_steps: traj.states.len() - 1,
                closed_form,
            }
        }
        _ => {
            let Some((a, b)) = symmetric_params(m) else {
                return Err(CliError::Validation(
                    "limit mode needs a hard model or a 2x2 model with a = c and b = d".into(),
                ));
            };
            let (x, y) = z0.pair();
            LimitOutput::Symmetric { outcome: symmetric_limit(a, b, (x, y), cfg.max_steps, cfg.tol)? }
        }
    };
    Ok(ModeOutput { json: json(&out)?, csv: None })
}

#[derive(Serialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
enum PeriodicOutput {
    Symmetric {
        a: f64,
        b: f64,
        /// `1 − (1−b)²/4`; the 2-cycle exists for `a` above it.
        threshold: f64,
        fixed_point: f64,
        orbit: Option<PeriodicOrbit>,
        outcome: Option<SymmetricOutcome>,
    },
    General {
        converged: bool,
        detected_period: Option<usize>,
        steps: usize,
        cycle: Option<[PopulationState; 2]>,
    },
}

fn periodic(cfg: &RunConfig) -> Result<ModeOutput> {
    let m = model(cfg);
    let out = match symmetric_params(m) {
        Some((a, b)) => PeriodicOutput::Symmetric {
            a,
            b,
            threshold: symmetric_threshold(b),
            fixed_point: fixed_point_symmetric(a, b),
            orbit: two_periodic(a, b),
            outcome: cfg
                .initial_state
                .as_ref()
                .map(|z| symmetric_limit(a, b, z.pair(), cfg.max_steps, cfg.tol))
                .transpose()?,
        },
        None => {
            let traj = iterate(&m.operator()?, state(cfg), cfg.max_steps, cfg.tol)?;
            let cycle = traj.detected_period.and_then(|_| {
                let k = traj.stopped_at?;
                Some([traj.states[k].clone(), traj.states[k + 1].clone()])
            });
            PeriodicOutput::General {
                converged: traj.converged,
                detected_period: traj.detected_period,
                steps: traj.states.len() - 1,
                cycle,
            }
        }
    };
    Ok(ModeOutput { json: json(&out)?, csv: None })
}

#[derive(Serialize)]
struct SymmetricCell {
    cell: usize,
    a: f64,
    b: f64,
    threshold: f64,
    below_threshold: bool,
    /// Diagonal fixed point `x*`, absent when the fixed points form families.
    fixed_point: Option<f64>,
    class: Option<Stability>,
    families: Vec<&'static str>,
    orbit: Option<PeriodicOrbit>,
}

#[derive(Serialize)]
struct CellPoint {
    family: &'static str,
    x: f64,
    y: f64,
    class: Stability,
}

#[derive(Serialize)]
struct FullCell {
    cell: usize,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    case: String,
    points: Vec<CellPoint>,
    families: Vec<&'static str>,
}

fn grid_value(i: usize, res: usize) -> f64 {
    i as f64 / (res - 1) as f64
}

fn sweep(cfg: &RunConfig) -> Result<ModeOutput> {
    let res = cfg.resolution;
    if res < 2 {
        return Err(CliError::Validation(format!("sweep resolution must be at least 2, got {res}")));
    }
    match cfg.axes {
        Axes::Ab => {
            let cells: Vec<SymmetricCell> = (0..res * res)
                .into_par_iter()
                .map(|cell| {
                    let (a, b) = (grid_value(cell / res, res), grid_value(cell % res, res));
                    let report = fixed_points_symmetric(a, b)?;
                    let point = report.points.first();
                    let threshold = symmetric_threshold(b);
                    Ok(SymmetricCell {
                        cell,
                        a,
                        b,
                        threshold,
                        below_threshold: a < threshold,
                        fixed_point: point.map(|p| p.state.pair().0),
                        class: point.map(|p| p.class),
                        families: report.families.iter().map(|f| f.family.as_str()).collect(),
                        orbit: two_periodic(a, b),
                    })
                })
                .collect::<Result<_>>()?;
            let mut csv = String::from("cell,a,b,threshold,x_star,class,orbit_p1,orbit_p2\n");
            for c in &cells {
                csv.push_str(&format!(
                    "{},{:.16e},{:.16e},{:.16e},{},{},{},{}\n",
                    c.cell,
                    c.a,
                    c.b,
                    c.threshold,
                    float_field(c.fixed_point),
                    c.class.map(Stability::as_str).unwrap_or("family"),
                    float_field(c.orbit.as_ref().map(|o| o.p1)),
                    float_field(c.orbit.as_ref().map(|o| o.p2)),
                ));
            }
            let json = json(&serde_json::json!({ "axes": "ab", "resolution": res, "cells": cells }))?;
            Ok(ModeOutput { json, csv: Some(csv) })
        }
        Axes::Abcd => {
            let cells: Vec<FullCell> = (0..res.pow(4))
                .into_par_iter()
                .map(|cell| {
                    let digit = |k: u32| grid_value(cell / res.pow(3 - k) % res, res);
                    let p = TwoByTwoParams { a: digit(0), b: digit(1), c: digit(2), d: digit(3) };
                    let report = fixed_points_2x2(&p)?;
                    Ok(FullCell {
                        cell,
                        a: p.a,
                        b: p.b,
                        c: p.c,
                        d: p.d,
                        case: report.case.clone(),
                        points: report
                            .points
                            .iter()
                            .map(|fp| {
                                let (x, y) = fp.state.pair();
                                CellPoint { family: fp.family.as_str(), x, y, class: fp.class }
                            })
                            .collect(),
                        families: report.families.iter().map(|f| f.family.as_str()).collect(),
                    })
                })
                .collect::<Result<_>>()?;
            let mut csv = String::from("cell,a,b,c,d,case,points,classes\n");
            for c in &cells {
                let classes: Vec<&str> = c.points.iter().map(|p| p.class.as_str()).collect();
                csv.push_str(&format!(
                    "{},{:.16e},{:.16e},{:.16e},{:.16e},\"{}\",{},{}\n",
                    c.cell,
                    c.a,
                    c.b,
                    c.c,
                    c.d,
                    c.case,
                    c.points.len(),
                    classes.join(";")
                ));
            }
            let json = json(&serde_json::json!({ "axes": "abcd", "resolution": res, "cells": cells }))?;
            Ok(ModeOutput { json, csv: Some(csv) })
        }
    }
}

#[derive(Serialize)]
struct WitnessRepr {
    generator: Vec<RationalRepr>,
    basis_label: String,
    product: Vec<RationalRepr>,
}

fn witness_repr(span: &LinearSpan<Rational>, labels: &[BasisLabel], w: IdealWitness<Rational>) -> WitnessRepr {
    WitnessRepr {
        generator: vector(&span.basis()[w.generator]),
        basis_label: labels[w.basis_index].to_string(),
        product: vector(&w.product),
    }
}

fn span_basis(span: &LinearSpan<Rational>) -> Vec<Vec<RationalRepr>> {
    span.basis().iter().map(|v| vector(v)).collect()
}

fn type_one_sum(n: usize, nu: usize) -> Vec<Rational> {
    let mut v = vec![Rational::from_ratio(0, 1); n + nu];
    v[0] = Rational::from_ratio(1, 1);
    v[n] = Rational::from_ratio(1, 1);
    v
}

#[derive(Serialize)]
struct ClosureReports {
    h0: ClosureReport,
    h1: ClosureReport,
    simplex: ClosureReport,
}

#[derive(Serialize)]
struct IdealCheck {
    basis: Vec<Vec<RationalRepr>>,
    is_ideal: bool,
    witness: Option<WitnessRepr>,
}

#[derive(Serialize)]
struct HypothesisRepr {
    candidates_checked: usize,
    counterexamples: Vec<Vec<Vec<RationalRepr>>>,
    verdict: String,
}

#[derive(Serialize)]
struct StructureResult {
    n: usize,
    nu: usize,
    dim: usize,
    dim_sq: usize,
    sq_idempotent: bool,
    closure: ClosureReports,
    one_dim_ideals: Vec<Vec<RationalRepr>>,
    type_one_sum: IdealCheck,
    hypothesis_sweep: HypothesisRepr,
}

fn structure(cfg: &RunConfig) -> Result<ModeOutput> {
    let m = model(cfg);
    let (n, nu) = m.dims();
    let table = m.table()?;
    let mut rng = rng(cfg);
    let derived = derived_dims(&table);
    let closure = ClosureReports {
        h0: closure_check(&table, ClosureSet::H0, cfg.samples, &mut rng)?,
        h1: closure_check(&table, ClosureSet::H1, cfg.samples, &mut rng)?,
        simplex: closure_check(&table, ClosureSet::Simplex, cfg.samples, &mut rng)?,
    };
    let ideals = one_dim_ideal_search(&table, IDEAL_RESTARTS, &mut rng);
    let sum = LinearSpan::new(n + nu, &[type_one_sum(n, nu)]);
    let witness = ideal_witness(&sum, &table).map(|w| witness_repr(&sum, table.basis(), w));
    let sweep = hypothesis_sweep(&table, HYPOTHESIS_TRIALS, &mut rng);
    let result = StructureResult {
        n,
        nu,
        dim: table.dim(),
        dim_sq: derived.dim_sq,
        sq_idempotent: derived.sq_idempotent,
        closure,
        one_dim_ideals: ideals.iter().map(|s| vector(&s.basis()[0])).collect(),
        type_one_sum: IdealCheck { basis: span_basis(&sum), is_ideal: witness.is_none(), witness },
        hypothesis_sweep: HypothesisRepr {
            candidates_checked: sweep.candidates_checked,
            counterexamples: sweep.counterexamples.iter().map(span_basis).collect(),
            verdict: sweep.verdict,
        },
    };
    Ok(ModeOutput { json: json(&result)?, csv: None })
}

#[derive(Serialize)]
struct QuotientResult {
    anchor: Anchor,
    ideal: IdealCheck,
    /// `B / I`, present only when `I` is an ideal.
    quotient: Option<TableRepr>,
    /// Products of the coset representatives reduced modulo `I`. For a
    /// non-ideal this depends on the representatives.
    reduced_products: TableRepr,
    /// Closed-form quotient table of the hard model.
    presented: Option<TableRepr>,
    matches_presented: Option<bool>,
}

fn quotient_mode(cfg: &RunConfig) -> Result<ModeOutput> {
    let m = model(cfg);
    let (n, nu) = m.dims();
    let d = n + nu;
    let table = m.table()?;
    let gens = cfg.ideal.clone().unwrap_or_else(|| vec![type_one_sum(n, nu)]);
    if let Some(g) = gens.iter().find(|g| g.len() != d) {
        return Err(CliError::Validation(format!("ideal generator has {} coordinates, expected {d}", g.len())));
    }
    let span = LinearSpan::new(d, &gens);
    let witness = ideal_witness(&span, &table).map(|w| witness_repr(&span, table.basis(), w));
    let exact = if is_ideal(&span, &table) { Some(quotient(&table, &span, cfg.anchor)?) } else { None };
    let reduced = reduce_products(&table, &span, cfg.anchor);
    let presented = (matches!(m, Model::Hard { .. }) && cfg.ideal.is_none())
        .then(|| presented_quotient_table::<Rational>(n, nu, cfg.anchor));
    let result = QuotientResult {
        anchor: cfg.anchor,
        ideal: IdealCheck { basis: span_basis(&span), is_ideal: witness.is_none(), witness },
        quotient: exact.as_ref().map(|q| TableRepr::from(&q.table)),
        reduced_products: TableRepr::from(&reduced.table),
        matches_presented: presented.as_ref().map(|p| *p == reduced.table),
        presented: presented.as_ref().map(TableRepr::from),
    };
    Ok(ModeOutput { json: json(&result)?, csv: None })
}

fn bernstein(cfg: &RunConfig) -> Result<ModeOutput> {
    let op = model(cfg).operator()?;
    let report: BernsteinReport = bernstein_check(&op, cfg.samples, cfg.tol, &mut rng(cfg))?;
    Ok(ModeOutput { json: json(&report)?, csv: None })
}
