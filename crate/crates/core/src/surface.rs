//! 1-D likelihood-surface scans and diagnostics for solver-induced
//! jaggedness: local-maxima counting, jump sizes, excess total variation,
//! the step-count/jump coincidence fraction, and the step-size sensitivity
//! check.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ode::ParamVector;
use crate::{real, Real};

/// Log-likelihood and solver step count at one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct PointEval<R: Real> {
    pub ll: R,
    /// Accepted solver steps; 0 for fixed-step solvers.
    pub n_steps: u64,
}

/// A scanned 1-D likelihood surface.
#[derive(Debug, Clone)]
pub struct LikelihoodSurface<R: Real> {
    pub param_index: usize,
    pub grid: Vec<R>,
    pub ll: Vec<R>,
    pub n_steps: Vec<u64>,
    /// Grid points whose forward solve failed; their ll entry is −∞.
    pub failed: Vec<bool>,
    pub solver_tag: String,
}

/// Inclusive evenly spaced grid with exactly `n` points.
pub fn param_grid<R: Real>(lo: R, hi: R, n: usize) -> Result<Vec<R>> {
    if n < 2 {
        return Err(Error::Invalid("grid needs at least two points".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Invalid("grid needs finite lo < hi".into()));
    }
    let step = (hi - lo) / real::<R>((n - 1) as f64);
    let mut grid: Vec<R> = (0..n)
        .map(|i| lo + step * R::from_usize(i).expect("grid index fits scalar"))
        .collect();
    grid[n - 1] = hi;
    Ok(grid)
}

/// Evaluates the target at each grid value substituted into `theta_base`.
///
/// Failed solves are recorded as −∞ with a flag instead of aborting the
/// scan; only a scan in which every point fails is an error. Grid points
/// are evaluated concurrently with deterministic output ordering.
pub fn scan_likelihood<R: Real>(
    eval: &(dyn Fn(&ParamVector<R>) -> Result<PointEval<R>> + Sync),
    theta_base: &ParamVector<R>,
    param_index: usize,
    grid: &[R],
    solver_tag: &str,
) -> Result<LikelihoodSurface<R>> {
    if param_index >= theta_base.len() {
        return Err(Error::Invalid(format!(
            "scan parameter index {param_index} out of bounds for θ of length {}",
            theta_base.len()
        )));
    }
    if grid.len() < 2 || !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Invalid("scan grid must be strictly increasing with ≥ 2 points".into()));
    }
    let rows: Vec<(R, u64, bool)> = grid
        .par_iter()
        .map(|&v| {
            let theta = match theta_base.with_value(param_index, v) {
                Ok(t) => t,
                Err(_) => return (R::neg_infinity(), 0, true),
            };
            match eval(&theta) {
                Ok(p) => (p.ll, p.n_steps, false),
                Err(_) => (R::neg_infinity(), 0, true),
            }
        })
        .collect();
    if rows.iter().all(|r| r.2) {
        return Err(Error::ScanFailed);
    }
    Ok(LikelihoodSurface {
        param_index,
        grid: grid.to_vec(),
        ll: rows.iter().map(|r| r.0).collect(),
        n_steps: rows.iter().map(|r| r.1).collect(),
        failed: rows.iter().map(|r| r.2).collect(),
        solver_tag: solver_tag.to_string(),
    })
}

/// Jaggedness summary of a scanned surface.
#[derive(Debug, Clone, Copy)]
pub struct JaggednessReport<R: Real> {
    /// Strict interior local maxima; plateaus of exactly equal values count once.
    pub n_local_maxima: usize,
    /// Largest |ΔLL| between adjacent grid points.
    pub max_abs_jump: R,
    /// Total variation of LL minus the total variation of its 5-point
    /// moving average (reflected at the boundaries), clamped at zero.
    pub tv_excess: R,
}

const SMOOTHER_WINDOW: usize = 5;

/// Quantifies spurious structure in a surface. Needs ≥ 7 grid points and a
/// fully finite scan.
pub fn jaggedness<R: Real>(surface: &LikelihoodSurface<R>) -> Result<JaggednessReport<R>> {
    let ll = &surface.ll;
    if ll.len() < 7 {
        return Err(Error::Invalid("jaggedness needs at least 7 grid points".into()));
    }
    if ll.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("jaggedness undefined with failed grid points".into()));
    }

    let n_local_maxima = count_plateau_maxima(ll);

    let mut max_abs_jump = R::zero();
    for w in ll.windows(2) {
        max_abs_jump = max_abs_jump.max((w[1] - w[0]).abs());
    }

    let smoothed = moving_average_reflect(ll, SMOOTHER_WINDOW);
    let tv = total_variation(ll);
    let tv_smooth = total_variation(&smoothed);
    let tv_excess = (tv - tv_smooth).max(R::zero());

    Ok(JaggednessReport { n_local_maxima, max_abs_jump, tv_excess })
}

/// Counts interior peaks after merging runs of exactly equal values.
fn count_plateau_maxima<R: Real>(values: &[R]) -> usize {
    let mut runs: Vec<R> = Vec::with_capacity(values.len());
    for &v in values {
        if runs.last() != Some(&v) {
            runs.push(v);
        }
    }
    if runs.len() < 3 {
        return 0;
    }
    let mut count = 0;
    for i in 1..runs.len() - 1 {
        if runs[i] > runs[i - 1] && runs[i] > runs[i + 1] {
            count += 1;
        }
    }
    count
}

fn total_variation<R: Real>(values: &[R]) -> R {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

fn moving_average_reflect<R: Real>(values: &[R], window: usize) -> Vec<R> {
    let n = values.len() as isize;
    let halfw = (window / 2) as isize;
    let w = real::<R>(window as f64);
    (0..n)
        .map(|i| {
            let mut acc = R::zero();
            for o in -halfw..=halfw {
                let mut j = i + o;
                if j < 0 {
                    j = -j;
                }
                if j >= n {
                    j = 2 * (n - 1) - j;
                }
                acc = acc + values[j as usize];
            }
            acc / w
        })
        .collect()
}

/// Outcome of [`step_count_jump_correlation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpCorrelation<R: Real> {
    /// No adjacent pair exceeded the jump threshold.
    NoJumps,
    /// Fraction of above-threshold jumps that coincide with a change in the
    /// solver's accepted step count.
    Fraction(R),
}

/// Among adjacent grid pairs with |ΔLL| above the threshold, the fraction
/// where the accepted step count also changes.
pub fn step_count_jump_correlation<R: Real>(
    surface: &LikelihoodSurface<R>,
    jump_threshold: R,
) -> Result<JumpCorrelation<R>> {
    if !(jump_threshold > R::zero()) {
        return Err(Error::Invalid("jump threshold must be positive".into()));
    }
    let mut jumps = 0usize;
    let mut with_step_change = 0usize;
    for i in 0..surface.ll.len().saturating_sub(1) {
        if surface.failed[i] || surface.failed[i + 1] {
            continue;
        }
        if (surface.ll[i + 1] - surface.ll[i]).abs() > jump_threshold {
            jumps += 1;
            if surface.n_steps[i + 1] != surface.n_steps[i] {
                with_step_change += 1;
            }
        }
    }
    if jumps == 0 {
        Ok(JumpCorrelation::NoJumps)
    } else {
        Ok(JumpCorrelation::Fraction(real(with_step_change as f64 / jumps as f64)))
    }
}

/// Result of re-evaluating the log-likelihood with the solver accuracy
/// setting scaled by (1 ± perturbation).
#[derive(Debug, Clone, Copy)]
pub struct StepSensitivity<R: Real> {
    pub ll_base: R,
    /// ll at setting × (1 − perturbation); `None` if that solve failed.
    pub ll_lower: Option<R>,
    /// ll at setting × (1 + perturbation); `None` if that solve failed.
    pub ll_upper: Option<R>,
    /// Max |ll_perturbed − ll_base| over the settings that solved.
    pub max_abs_diff: Option<R>,
    /// `max_abs_diff ≤ threshold`; `None` when both perturbed solves failed.
    pub pass: Option<bool>,
}

/// Step-size sensitivity diagnostic: if the solver is accurate enough, the
/// log-likelihood should not be a strong function of its accuracy setting.
///
/// `eval(scale)` must compute the log-likelihood with dt (or rtol) multiplied
/// by `scale`; `eval(1)` must succeed, perturbed failures are reported in
/// the output rather than raised.
pub fn step_size_sensitivity<R: Real>(
    eval: impl Fn(R) -> Result<R>,
    perturbation: R,
    threshold: R,
) -> Result<StepSensitivity<R>> {
    if !(perturbation > R::zero() && perturbation < R::one()) {
        return Err(Error::Invalid("perturbation must lie in (0, 1)".into()));
    }
    let ll_base = eval(R::one())?;
    let ll_lower = eval(R::one() - perturbation).ok();
    let ll_upper = eval(R::one() + perturbation).ok();
    let mut max_abs_diff: Option<R> = None;
    for ll in [ll_lower, ll_upper].into_iter().flatten() {
        let d = (ll - ll_base).abs();
        max_abs_diff = Some(max_abs_diff.map_or(d, |m: R| m.max(d)));
    }
    Ok(StepSensitivity {
        ll_base,
        ll_lower,
        ll_upper,
        max_abs_diff,
        pass: max_abs_diff.map(|d| d <= threshold),
    })
}
