use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::algebra::TwoByTwoParams;
use crate::error::Error;

use super::jacobian::{classify, eigenvalues_at, jacobian, Stability};
use super::sampling::random_state;
use super::symmetric::{fixed_point_symmetric, symmetric_threshold};
use super::{Operator, PopulationState};

/// Bound on `‖V(p) − p‖∞` for every reported fixed point.
pub const FIXED_POINT_RESIDUAL_TOL: f64 = 1e-10;

const LEADING_COEFF_TOL: f64 = 1e-12;
const ROOT_WINDOW: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Point,
    Segment,
    #[serde(rename = "curve P(y)")]
    CurveP,
    #[serde(rename = "P0")]
    P0,
    #[serde(rename = "Q1")]
    Q1,
    #[serde(rename = "Q2")]
    Q2,
    Origin,
    Vertex,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Point => "point",
            Self::Segment => "segment",
            Self::CurveP => "curve P(y)",
            Self::P0 => "P0",
            Self::Q1 => "Q1",
            Self::Q2 => "Q2",
            Self::Origin => "origin",
            Self::Vertex => "vertex",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPoint {
    pub family: Family,
    pub state: PopulationState,
    pub eigenvalues: Vec<Complex64>,
    pub class: Stability,
    pub residual: f64,
}

/// Geometry of a one-parameter (or face) family of fixed points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyShape {
    /// `{(x, 0) : x ∈ [0, 1]}` in `(x_2, y_2)` coordinates.
    SegmentX,
    /// `{(0, y) : y ∈ [0, 1]}`.
    SegmentY,
    /// `P(y) = (a(1−y)/(a(1−y)+y), y)`, `y ∈ [0, 1]`.
    CurveP { a: f64 },
    /// `{x = e_1} × S^{ν−1}` of the hard operator.
    FemaleVertexFace { n: usize, nu: usize },
    /// `S^{n−1} × {y = e_1}` of the hard operator.
    MaleVertexFace { n: usize, nu: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct ParametricFamily {
    pub family: Family,
    pub shape: FamilyShape,
    pub endpoints: Vec<PopulationState>,
    pub class: Stability,
}

impl ParametricFamily {
    fn new(family: Family, shape: FamilyShape) -> Self {
        let endpoints = match shape {
            FamilyShape::SegmentX | FamilyShape::SegmentY | FamilyShape::CurveP { .. } => {
                vec![shape_point(shape, 0.0), shape_point(shape, 1.0)]
            }
            FamilyShape::FemaleVertexFace { n, nu } => {
                (0..nu).map(|l| PopulationState::new_unchecked(unit(n, 0), unit(nu, l))).collect()
            }
            FamilyShape::MaleVertexFace { n, nu } => {
                (0..n).map(|i| PopulationState::new_unchecked(unit(n, i), unit(nu, 0))).collect()
            }
        };
        Self { family, shape, endpoints, class: Stability::NonHyperbolic }
    }

    /// Member of a one-parameter family at parameter `t ∈ [0, 1]`.
    pub fn point_at(&self, t: f64) -> Option<PopulationState> {
        match self.shape {
            FamilyShape::FemaleVertexFace { .. } | FamilyShape::MaleVertexFace { .. } => None,
            shape => Some(shape_point(shape, t)),
        }
    }

    /// Member of a face family for a given distribution on the free factor.
    pub fn face_member(&self, free: Vec<f64>) -> Option<PopulationState> {
        match self.shape {
            FamilyShape::FemaleVertexFace { n, .. } => Some(PopulationState::new_unchecked(unit(n, 0), free)),
            FamilyShape::MaleVertexFace { nu, .. } => Some(PopulationState::new_unchecked(free, unit(nu, 0))),
            _ => None,
        }
    }
}

fn unit(len: usize, at: usize) -> Vec<f64> {
    let mut v = vec![0.0; len];
    v[at] = 1.0;
    v
}

fn shape_point(shape: FamilyShape, t: f64) -> PopulationState {
    let (x, y) = match shape {
        FamilyShape::SegmentX => (t, 0.0),
        FamilyShape::SegmentY => (0.0, t),
        FamilyShape::CurveP { a } => {
            let den = a * (1.0 - t) + t;
            (if den == 0.0 { 0.0 } else { a * (1.0 - t) / den }, t)
        }
        _ => unreachable!("faces have no scalar parameter"),
    };
    PopulationState::from_pair(x, y)
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    /// Which branch of the case analysis produced the report.
    pub case: String,
    pub points: Vec<FixedPoint>,
    pub families: Vec<ParametricFamily>,
    /// `D = M² − 4·L·C0` of the quadratic in `y`, when it was solved.
    pub discriminant: Option<f64>,
}

impl FixedPointReport {
    fn new(case: impl Into<String>) -> Self {
        Self { case: case.into(), points: Vec::new(), families: Vec::new(), discriminant: None }
    }

    pub fn point(&self, family: Family) -> Option<&FixedPoint> {
        self.points.iter().find(|p| p.family == family)
    }
}

fn make_point(op: &Operator, family: Family, state: PopulationState) -> Result<FixedPoint, Error> {
    let image = op.apply(&state)?;
    let residual = image.distance(&state);
    if residual > FIXED_POINT_RESIDUAL_TOL {
        return Err(Error::Precondition(format!(
            "{} candidate {:?} has residual {residual:e}",
            family.as_str(),
            state.coords()
        )));
    }
    let eigenvalues = eigenvalues_at(op, &state.reduced());
    let class = classify(&eigenvalues).unwrap_or(Stability::NonHyperbolic);
    Ok(FixedPoint { family, state, eigenvalues, class, residual })
}

/// Fixed points of the hard operator: the faces `{x = e_1} × S^{ν−1}` and
/// `S^{n−1} × {y = e_1}`, both non-hyperbolic.
pub fn fixed_points_hard(n: usize, nu: usize) -> Result<FixedPointReport, Error> {
    if n == 0 || nu == 0 {
        return Err(Error::Precondition("n and ν must be positive".into()));
    }
    let mut report = FixedPointReport::new("faces x = e1 and y = e1");
    report.families.push(ParametricFamily::new(Family::Segment, FamilyShape::FemaleVertexFace { n, nu }));
    report.families.push(ParametricFamily::new(Family::Segment, FamilyShape::MaleVertexFace { n, nu }));
    Ok(report)
}

/// Roots of `L y² + M y + C0 = 0` with sign-aware extraction. `None` when
/// the discriminant is negative.
fn stable_quadratic_roots(l: f64, m: f64, c0: f64) -> Option<(f64, f64)> {
    let disc = m * m - 4.0 * l * c0;
    if disc < 0.0 {
        return None;
    }
    let q = -0.5 * (m + m.signum() * disc.sqrt());
    let q = if q == 0.0 { -0.5 * disc.sqrt() } else { q };
    let r1 = q / l;
    let r2 = if q != 0.0 { c0 / q } else { r1 };
    Some(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}

fn admit(v: f64) -> Option<f64> {
    (-ROOT_WINDOW..=1.0 + ROOT_WINDOW).contains(&v).then(|| v.clamp(0.0, 1.0))
}

fn x_from_y(p: &TwoByTwoParams<f64>, y: f64) -> f64 {
    let w = 1.0 - y;
    let den = p.a * w + 1.0 - p.b * w;
    if den == 0.0 {
        0.0
    } else {
        p.a * w / den
    }
}

/// Fixed points of `T` following the case analysis of the system
/// `x = (1−y)(a+(b−a)x)`, `y = (1−x)(c+(d−c)y)`.
pub fn fixed_points_2x2(p: &TwoByTwoParams<f64>) -> Result<FixedPointReport, Error> {
    let p = TwoByTwoParams::new(p.a, p.b, p.c, p.d)?;
    let op = Operator::TwoByTwo(p.clone());
    let TwoByTwoParams { a, b, c, d } = p.clone();

    if a == 0.0 && c == 0.0 && (b == 1.0 || d == 1.0) {
        let mut report = FixedPointReport::new(match (b == 1.0, d == 1.0) {
            (true, true) => "a = c = 0, b = d = 1",
            (true, false) => "a = c = 0, b = 1",
            _ => "a = c = 0, d = 1",
        });
        if b == 1.0 {
            report.families.push(ParametricFamily::new(Family::Segment, FamilyShape::SegmentX));
        }
        if d == 1.0 {
            report.families.push(ParametricFamily::new(Family::Segment, FamilyShape::SegmentY));
        }
        return Ok(report);
    }
    if a == 0.0 && c == 0.0 {
        let mut report = FixedPointReport::new("a = c = 0, b ≠ 1, d ≠ 1");
        report.points.push(make_point(&op, Family::Origin, PopulationState::from_pair(0.0, 0.0))?);
        return Ok(report);
    }
    if a == 0.0 && b == 1.0 {
        // x = (1−y)x forces x = 0 or y = 0. Besides (1, 0), the branch x = 0
        // gives y = c/(1+c−d), which lies in (0, 1] because c > 0.
        let mut report = FixedPointReport::new("a = 0, b = 1, c ≠ 0");
        report.points.push(make_point(&op, Family::Vertex, PopulationState::from_pair(1.0, 0.0))?);
        let y = c / (1.0 + c - d);
        report.points.push(make_point(&op, Family::Point, PopulationState::from_pair(0.0, y))?);
        return Ok(report);
    }
    if a == c && b == 1.0 && d == 1.0 {
        let mut report = FixedPointReport::new("a = c ≠ 0, b = d = 1");
        report.families.push(ParametricFamily::new(Family::CurveP, FamilyShape::CurveP { a }));
        return Ok(report);
    }

    let lead = b * (d - c) + a - b;
    let mid = 2.0 * b * c - b * d - a + b - c + d - 1.0;
    let c0 = c * (1.0 - b);
    let disc = mid * mid - 4.0 * lead * c0;

    if lead.abs() < LEADING_COEFF_TOL {
        let mut report = FixedPointReport::new("b(d − c) = b − a");
        report.discriminant = Some(disc);
        let y = c0 / (c0 + 1.0 - d);
        let x = a * (1.0 - d) / (a * (1.0 - d) + c0 + (1.0 - b) * (1.0 - d));
        report.points.push(make_point(&op, Family::P0, PopulationState::from_pair(x, y))?);
        return Ok(report);
    }

    let mut report = FixedPointReport::new(if lead < 0.0 { "b(d − c) < b − a" } else { "b(d − c) > b − a" });
    report.discriminant = Some(disc);
    let Some((lo, hi)) = stable_quadratic_roots(lead, mid, c0) else {
        return Ok(report);
    };
    let mut roots = vec![(Family::Q1, lo), (Family::Q2, hi)];
    if lo == hi {
        roots.remove(0);
    }
    for (family, y) in roots {
        let Some(y) = admit(y) else { continue };
        let state = PopulationState::from_pair(x_from_y(&p, y), y);
        // Roots that fail the residual check are dropped rather than reported.
        if let Ok(point) = make_point(&op, family, state) {
            report.points.push(point);
        }
    }
    Ok(report)
}

/// Fixed points of the symmetric operator (`a = c`, `b = d`).
pub fn fixed_points_symmetric(a: f64, b: f64) -> Result<FixedPointReport, Error> {
    let p = TwoByTwoParams::new(a, b, a, b)?;
    let op = Operator::TwoByTwo(p);
    if b == 1.0 {
        let mut report = FixedPointReport::new("b = 1");
        if a == 0.0 {
            report.families.push(ParametricFamily::new(Family::Segment, FamilyShape::SegmentX));
            report.families.push(ParametricFamily::new(Family::Segment, FamilyShape::SegmentY));
        } else {
            report.families.push(ParametricFamily::new(Family::CurveP, FamilyShape::CurveP { a }));
        }
        return Ok(report);
    }
    let x = fixed_point_symmetric(a, b);
    let mut report = FixedPointReport::new(if a == b { "a = b < 1" } else { "a ≠ b, b < 1" });
    let mut point = make_point(&op, Family::Point, PopulationState::from_pair(x, x))?;
    // At the threshold |f'(x*)| = 1 exactly; rounding can push the computed
    // modulus just outside the band.
    if a != b && (a - symmetric_threshold(b)).abs() <= 1e-12 {
        point.class = Stability::NonHyperbolic;
    }
    report.points.push(point);
    Ok(report)
}

/// Multi-start search for fixed points of any operator: iterate from random
/// starts, then polish with Newton steps on `V(r) − r` in reduced coordinates.
pub fn fixed_points_numeric<R: Rng>(
    op: &Operator,
    starts: usize,
    rng: &mut R,
) -> Result<FixedPointReport, Error> {
    let (n, nu) = op.dims();
    let mut report = FixedPointReport::new("numeric multi-start");
    if op.reduced_dim() == 0 {
        let z = PopulationState::new_unchecked(vec![1.0], vec![1.0]);
        report.points.push(FixedPoint {
            family: Family::Point,
            state: z,
            eigenvalues: Vec::new(),
            class: Stability::Attracting,
            residual: 0.0,
        });
        return Ok(report);
    }
    for _ in 0..starts {
        let mut z = random_state(n, nu, rng);
        for _ in 0..2_000 {
            z = op.apply_unchecked(&z);
        }
        let Some(r) = newton(op, z.reduced()) else { continue };
        let state = PopulationState::from_reduced(n, nu, &r);
        if state.coords().iter().any(|v| *v < -ROOT_WINDOW) {
            continue;
        }
        let clamped = clamp_to_simplex(&state);
        if report.points.iter().any(|q| q.state.distance(&clamped) < 1e-8) {
            continue;
        }
        if let Ok(point) = make_point(op, Family::Point, clamped) {
            report.points.push(point);
        }
    }
    report.points.sort_by(|p, q| p.state.coords().partial_cmp(&q.state.coords()).unwrap());
    Ok(report)
}

fn newton(op: &Operator, mut r: Vec<f64>) -> Option<Vec<f64>> {
    let m = r.len();
    for _ in 0..50 {
        let image = op.apply_reduced(&r);
        let f: Vec<f64> = image.iter().zip(&r).map(|(v, u)| v - u).collect();
        if f.iter().all(|v| v.abs() < 1e-15) {
            return Some(r);
        }
        let jac = jacobian(op, &r) - nalgebra::DMatrix::identity(m, m);
        let rhs = nalgebra::DVector::from_iterator(m, f.iter().map(|v| -v));
        // Singular systems (continua of fixed points) fall back to a
        // least-squares step.
        let step = match jac.clone().lu().solve(&rhs) {
            Some(s) if s.iter().all(|v| v.is_finite()) => s,
            _ => jac.svd(true, true).solve(&rhs, 1e-12).ok()?,
        };
        for (ri, si) in r.iter_mut().zip(step.iter()) {
            *ri += si;
        }
        if r.iter().any(|v| !v.is_finite()) {
            return None;
        }
    }
    let image = op.apply_reduced(&r);
    image.iter().zip(&r).all(|(v, u)| (v - u).abs() <= FIXED_POINT_RESIDUAL_TOL).then_some(r)
}

fn clamp_to_simplex(z: &PopulationState) -> PopulationState {
    let fix = |v: &[f64]| {
        let mut w: Vec<f64> = v.iter().map(|c| c.max(0.0)).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|c| *c /= s);
        w
    };
    PopulationState::new_unchecked(fix(z.x()), fix(z.y()))
}
