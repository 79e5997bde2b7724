//! Sampled error between an original and a reduced disk curve.

use serde::{Deserialize, Serialize};

use crate::curve::DiskRationalBezier;
use crate::error::{Error, Result};
use crate::exec::{grid_param, map_grid, Execution};

/// Grid maxima of the center distance and of `|r(t) − ř(t)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub max_center_err: f64,
    pub argmax_center_t: f64,
    pub max_radius_err: f64,
    pub argmax_radius_t: f64,
    pub samples: usize,
}

/// Per-sample errors, used for plotting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSample {
    pub t: f64,
    pub center_err: f64,
    pub radius_err: f64,
}

pub(crate) fn check_samples(samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(Error::invalid(format!("need at least 2 samples, got {samples}")));
    }
    Ok(())
}

pub fn error_profile(
    original: &DiskRationalBezier,
    reduced: &DiskRationalBezier,
    samples: usize,
    exec: Execution,
) -> Result<Vec<ErrorSample>> {
    check_samples(samples)?;
    Ok(map_grid(samples, exec, |t| ErrorSample {
        t,
        center_err: original.center_at(t).distance(reduced.center_at(t)),
        radius_err: (original.radius_at(t) - reduced.radius_at(t)).abs(),
    }))
}

/// ∞-norm errors over `samples` uniform parameters (first maximum wins).
pub fn measure(original: &DiskRationalBezier, reduced: &DiskRationalBezier, samples: usize) -> Result<ErrorReport> {
    measure_with(original, reduced, samples, Execution::default())
}

pub fn measure_with(
    original: &DiskRationalBezier,
    reduced: &DiskRationalBezier,
    samples: usize,
    exec: Execution,
) -> Result<ErrorReport> {
    let profile = error_profile(original, reduced, samples, exec)?;
    let argmax = |f: fn(&ErrorSample) -> f64| {
        profile
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (j, s)| {
                let v = f(s);
                if v > best.1 {
                    (j, v)
                } else {
                    best
                }
            })
    };
    let (jc, ec) = argmax(|s| s.center_err);
    let (jr, er) = argmax(|s| s.radius_err);
    Ok(ErrorReport {
        max_center_err: ec,
        argmax_center_t: grid_param(jc, samples),
        max_radius_err: er,
        argmax_radius_t: grid_param(jr, samples),
        samples,
    })
}
