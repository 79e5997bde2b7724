//! Optimal multi-degree reduction of disk rational Bézier curves.
//!
//! The pipeline runs in three stages, each consuming the previous output:
//!
//! 1. **Weights.** The denominator `ω(t)` is projected in L² onto degree-`m`
//!    Bernstein space, with every reduced weight kept at or above a small
//!    positive floor. This is a box-constrained QP on the Bernstein Gram
//!    matrices.
//! 2. **Centers.** With the reduced weights fixed, the center curve is fitted
//!    by weighted least squares. The weight `ρ(t) = ω(t) ω̌(t)² / ω̌_l` clears
//!    the rational denominators, so the normal equations become a small
//!    linear system. Endpoint controls (and, for C¹ ends, their neighbours)
//!    are fixed in closed form before the solve.
//! 3. **Radii.** The radius polynomial is projected in L² onto degree `m`
//!    subject to its degree-`n` elevation dominating `r_i + d`
//!    coefficient-wise, where `d` bounds the sampled center displacement.
//!    Bernstein coefficient domination then gives `ř(t) ≥ r(t) + d` on the
//!    whole interval, so the reduced disk covers the original one wherever
//!    the centers are within `d`.

use nalgebra::{DMatrix, DVector};

use crate::bernstein::{binom, elevation_matrix, gram_cross, gram_same};
use crate::curve::DiskRationalBezier;
use crate::disk::Point;
use crate::error::{Error, Result, Stage};
use crate::exec::{map_grid, map_slice, Execution};
use crate::linalg::solve_linear;
use crate::metrics::{check_samples, measure_with, ErrorReport};
use crate::qp::{solve_qp, QpProblem, QpSolution};

/// Default number of uniform samples for `d` and the error metrics.
pub const DEFAULT_SAMPLES: usize = 1001;

/// Relative size of the positivity floor for weights and radii.
pub const POSITIVITY_FLOOR: f64 = 1e-6;

/// Order of contact at one end of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Continuity {
    /// Position only.
    #[default]
    C0,
    /// Position and first derivative.
    C1,
}

impl Continuity {
    pub fn order(self) -> usize {
        match self {
            Continuity::C0 => 0,
            Continuity::C1 => 1,
        }
    }

    pub fn from_order(order: usize) -> Result<Self> {
        match order {
            0 => Ok(Continuity::C0),
            1 => Ok(Continuity::C1),
            k => Err(Error::invalid(format!("continuity order {k} not supported (0 or 1)"))),
        }
    }
}

/// How sampled center distances are aggregated into `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMode {
    /// `max_j ‖p(t_j) − p̌(t_j)‖`.
    #[default]
    MaxDistance,
    /// `Σ_j ‖p(t_j) − p̌(t_j)‖`.
    SumDistance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionConfig {
    pub target_degree: usize,
    pub start: Continuity,
    pub end: Continuity,
    pub samples: usize,
    pub d_mode: DistanceMode,
    /// Floor for reduced weights; `None` means `1e-6 · max ω_i`.
    pub eps_weight: Option<f64>,
    /// Floor for reduced radii; `None` means `1e-6 · max r_i`.
    pub eps_radius: Option<f64>,
    pub execution: Execution,
}

impl ReductionConfig {
    pub fn new(target_degree: usize) -> Self {
        Self {
            target_degree,
            start: Continuity::C0,
            end: Continuity::C0,
            samples: DEFAULT_SAMPLES,
            d_mode: DistanceMode::MaxDistance,
            eps_weight: None,
            eps_radius: None,
            execution: Execution::default(),
        }
    }

    pub fn continuity(mut self, start: Continuity, end: Continuity) -> Self {
        self.start = start;
        self.end = end;
        self
    }

    pub fn samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn d_mode(mut self, mode: DistanceMode) -> Self {
        self.d_mode = mode;
        self
    }

    pub fn execution(mut self, exec: Execution) -> Self {
        self.execution = exec;
        self
    }

    /// Checks the configuration against a curve of degree `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let m = self.target_degree;
        if m >= n {
            return Err(Error::invalid(format!(
                "target degree {m} must be below the curve degree {n}"
            )));
        }
        let need = self.start.order() + self.end.order() + 1;
        if m < need {
            return Err(Error::invalid(format!(
                "target degree {m} too low for C({},{}) ends (need at least {need})",
                self.start.order(),
                self.end.order()
            )));
        }
        check_samples(self.samples)?;
        for (name, eps) in [("eps_weight", self.eps_weight), ("eps_radius", self.eps_radius)] {
            if let Some(e) = eps {
                if !(e.is_finite() && e >= 0.0) {
                    return Err(Error::invalid(format!("{name} = {e} must be nonnegative")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub reduced: DiskRationalBezier,
    /// Center displacement bound used in the radius constraints.
    pub d: f64,
    pub max_center_err: f64,
    pub max_radius_err: f64,
    pub errors: ErrorReport,
    pub weight_qp: QpSolution,
    pub radius_qp: QpSolution,
}

fn floor_for(values: &[f64]) -> f64 {
    POSITIVITY_FLOOR * values.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
}

fn check_target(n: usize, m: usize) -> Result<()> {
    if m >= n {
        return Err(Error::invalid(format!(
            "target degree {m} must be below the input degree {n}"
        )));
    }
    Ok(())
}

/// L² projection of a degree-`n` Bernstein polynomial onto degree `m`,
/// as `min xᵀHx − 2xᵀ(S c)`, with no constraints yet.
fn projection_program(coeffs: &[f64], m: usize) -> Result<QpProblem> {
    let n = coeffs.len() - 1;
    let h = gram_same(m);
    let s = gram_cross(m, n);
    let c = &s * DVector::from_column_slice(coeffs);
    QpProblem::unconstrained(h, c)
}

/// Weight QP: `min Σ ω̌_i ω̌_j H_ij − 2 Σ ω̌_i ω_j S_ij` subject to `ω̌_i ≥ eps`.
pub fn weight_program(weights: &[f64], m: usize, eps: f64) -> Result<QpProblem> {
    if weights.is_empty() {
        return Err(Error::invalid("no weights given"));
    }
    check_target(weights.len() - 1, m)?;
    if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::invalid(format!("weights[{i}] = {w} must be positive")));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::invalid(format!("weight floor {eps} must be positive")));
    }
    projection_program(weights, m)?
        .with_constraints(&DMatrix::identity(m + 1, m + 1), &DVector::from_element(m + 1, eps))
}

/// Reduced weights: the positivity-constrained L² projection of `ω(t)`.
pub fn reduce_weights(weights: &[f64], m: usize, eps: f64) -> Result<Vec<f64>> {
    Ok(solve_qp(&weight_program(weights, m, eps)?)?.x)
}

/// Radius QP: `min Σ ř_i ř_j H_ij − 2 Σ ř_i r_j S_ij` subject to
/// `(E ř)_i ≥ r_i + d` for the degree-`n` elevation `E`, and `ř_j ≥ eps`.
///
/// Rows `0..=n` are the bounding constraints, rows `n+1..` the floors.
pub fn radius_program(radii: &[f64], m: usize, d: f64, eps: f64) -> Result<QpProblem> {
    if radii.is_empty() {
        return Err(Error::invalid("no radii given"));
    }
    let n = radii.len() - 1;
    check_target(n, m)?;
    if radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::invalid("radii must be finite and nonnegative"));
    }
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::invalid(format!("center distance d = {d} must be nonnegative")));
    }
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::invalid(format!("radius floor {eps} must be nonnegative")));
    }
    let mut a = DMatrix::zeros(n + 1 + m + 1, m + 1);
    a.rows_mut(0, n + 1).copy_from(&elevation_matrix(m, n));
    a.rows_mut(n + 1, m + 1).copy_from(&DMatrix::identity(m + 1, m + 1));
    let b = DVector::from_iterator(
        n + m + 2,
        radii.iter().map(|r| r + d).chain(std::iter::repeat_n(eps, m + 1)),
    );
    projection_program(radii, m)?.with_constraints(&a, &b)
}

/// Reduced radius coefficients bounding `r(t) + d`.
pub fn reduce_radius(radii: &[f64], m: usize, d: f64, eps: f64) -> Result<Vec<f64>> {
    Ok(solve_qp(&radius_program(radii, m, d, eps)?)?.x)
}

/// Weighted least-squares control points for the reduced center curve.
///
/// `p̌_0 = p_0` and `p̌_m = p_n` always. A C¹ start fixes
/// `p̌_1 = p̌_0 + (n ω̌_0 ω_1)/(m ω_0 ω̌_1) (p_1 − p_0)`, a C¹ end fixes
/// `p̌_{m−1} = p̌_m − (n ω_{n−1} ω̌_m)/(m ω_n ω̌_{m−1}) (p_n − p_{n−1})`.
/// The free controls solve
/// `Σ_j M_lj p̌_j = Σ_j Σ_i c_lji ω̌_j ω_i p_i − Σ_{fixed j} M_lj p̌_j`
/// with `c_lji = C(m,j) C(n,i) / C(2m+n, i+j+l)` and
/// `M_lj = Σ_i c_lji ω_i ω̌_j`, for each free index `l`. Both coordinates
/// share the matrix.
pub fn solve_center(
    curve: &DiskRationalBezier,
    reduced_weights: &[f64],
    start: Continuity,
    end: Continuity,
) -> Result<Vec<Point>> {
    let n = curve.degree();
    if reduced_weights.is_empty() {
        return Err(Error::invalid("no reduced weights given"));
    }
    let m = reduced_weights.len() - 1;
    let (k, h) = (start.order(), end.order());
    if m < k + h + 1 {
        return Err(Error::invalid(format!(
            "degree {m} too low for C({k},{h}) ends"
        )));
    }
    if let Some((i, w)) = reduced_weights
        .iter()
        .enumerate()
        .find(|(_, w)| !(w.is_finite() && **w > 0.0))
    {
        return Err(Error::invalid(format!("reduced weights[{i}] = {w} must be positive")));
    }
    let w = curve.weights();
    let wr = reduced_weights;
    let p = curve.centers();

    let mut out = vec![Point::ORIGIN; m + 1];
    out[0] = p[0];
    out[m] = p[n];
    let (nf, mf) = (n as f64, m as f64);
    if k == 1 {
        out[1] = out[0] + (p[1] - p[0]) * (nf * wr[0] * w[1] / (mf * w[0] * wr[1]));
    }
    if h == 1 {
        out[m - 1] = out[m] - (p[n] - p[n - 1]) * (nf * w[n - 1] * wr[m] / (mf * w[n] * wr[m - 1]));
    }

    let free: Vec<usize> = (k + 1..m - h).collect();
    if free.is_empty() {
        return Ok(out);
    }
    let coef = |l: usize, j: usize, i: usize| binom(m, j) * binom(n, i) / binom(2 * m + n, i + j + l);
    // M_lj for every column j; fixed columns move to the right-hand side.
    let row_entries = |l: usize| -> Vec<f64> {
        (0..=m)
            .map(|j| (0..=n).map(|i| coef(l, j, i) * w[i] * wr[j]).sum())
            .collect()
    };
    let dim = free.len();
    let mut mat = DMatrix::zeros(dim, dim);
    let mut rhs = DMatrix::zeros(dim, 2);
    for (a, &l) in free.iter().enumerate() {
        let entries = row_entries(l);
        let (mut bx, mut by) = (0.0, 0.0);
        for (j, wj) in wr.iter().enumerate() {
            for (i, pi) in p.iter().enumerate() {
                let f = coef(l, j, i) * wj * w[i];
                bx += f * pi.x;
                by += f * pi.y;
            }
        }
        for (j, &mlj) in entries.iter().enumerate() {
            match free.iter().position(|&f| f == j) {
                Some(b) => mat[(a, b)] = mlj,
                None => {
                    bx -= mlj * out[j].x;
                    by -= mlj * out[j].y;
                }
            }
        }
        rhs[(a, 0)] = bx;
        rhs[(a, 1)] = by;
    }
    let sol = solve_linear(&mat, &rhs)?;
    for (b, &j) in free.iter().enumerate() {
        out[j] = Point::new(sol[(b, 0)], sol[(b, 1)]);
    }
    Ok(out)
}

/// Sampled center displacement on `t_j = j / (samples − 1)`.
pub fn compute_d(
    original: &DiskRationalBezier,
    reduced: &DiskRationalBezier,
    samples: usize,
    mode: DistanceMode,
) -> Result<f64> {
    compute_d_with(original, reduced, samples, mode, Execution::default())
}

pub fn compute_d_with(
    original: &DiskRationalBezier,
    reduced: &DiskRationalBezier,
    samples: usize,
    mode: DistanceMode,
    exec: Execution,
) -> Result<f64> {
    check_samples(samples)?;
    let dist = map_grid(samples, exec, |t| original.center_at(t).distance(reduced.center_at(t)));
    Ok(match mode {
        DistanceMode::MaxDistance => dist.into_iter().fold(0.0, f64::max),
        DistanceMode::SumDistance => dist.into_iter().sum(),
    })
}

/// Runs weights → centers → distance → radii and measures the result.
pub fn reduce(curve: &DiskRationalBezier, cfg: &ReductionConfig) -> Result<ReductionResult> {
    let n = curve.degree();
    cfg.validate(n)?;
    let m = cfg.target_degree;

    let eps_w = cfg.eps_weight.unwrap_or_else(|| floor_for(curve.weights()));
    let weight_qp = weight_program(curve.weights(), m, eps_w)
        .and_then(|p| solve_qp(&p))
        .map_err(|e| e.at(Stage::Weights))?;

    let centers = solve_center(curve, &weight_qp.x, cfg.start, cfg.end).map_err(|e| e.at(Stage::Centers))?;

    let center_only = DiskRationalBezier::from_parts(&centers, &vec![0.0; m + 1], &weight_qp.x)
        .map_err(|e| e.at(Stage::Centers))?;
    let d = compute_d_with(curve, &center_only, cfg.samples, cfg.d_mode, cfg.execution)
        .map_err(|e| e.at(Stage::Distance))?;

    let radii = curve.radii();
    let eps_r = cfg.eps_radius.unwrap_or_else(|| floor_for(&radii));
    let radius_qp = radius_program(&radii, m, d, eps_r)
        .and_then(|p| solve_qp(&p))
        .map_err(|e| e.at(Stage::Radii))?;

    // With a zero floor the solver may land a hair below zero.
    let reduced_radii: Vec<f64> = radius_qp.x.iter().map(|r| r.max(0.0)).collect();
    let reduced = DiskRationalBezier::from_parts(&centers, &reduced_radii, &weight_qp.x)
        .map_err(|e| e.at(Stage::Radii))?;
    let errors = measure_with(curve, &reduced, cfg.samples, cfg.execution).map_err(|e| e.at(Stage::Distance))?;

    Ok(ReductionResult {
        reduced,
        d,
        max_center_err: errors.max_center_err,
        max_radius_err: errors.max_radius_err,
        errors,
        weight_qp,
        radius_qp,
    })
}

/// Reduces many curves with the same configuration, one result per curve.
///
/// Each curve's own sampling runs sequentially; the batch itself follows
/// `exec`.
pub fn reduce_batch(
    curves: &[DiskRationalBezier],
    cfg: &ReductionConfig,
    exec: Execution,
) -> Vec<Result<ReductionResult>> {
    let inner = cfg.clone().execution(Execution::Sequential);
    map_slice(curves, exec, |c| reduce(c, &inner))
}
