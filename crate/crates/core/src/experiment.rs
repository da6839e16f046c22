//! Shared wiring between models, solvers, and likelihoods: a solver
//! selection type plus forward-prediction and scan-target helpers.

use crate::error::Result;
use crate::euler::{solve_euler, FixedStepConfig};
use crate::likelihood::{log_likelihood_gaussian, Dataset, GaussianIidNoise, ObservationOperator};
use crate::ode::{sample_trajectory, OdeSystem, ParamVector, Trajectory};
use crate::rk::{solve_adaptive, RkMethod, RkPair, Tolerances, DEFAULT_ATOL, DEFAULT_MAX_STEPS};
use crate::surface::PointEval;
use crate::{as_f64, real, Real};

/// Which solver to run the forward problem with.
#[derive(Debug, Clone, Copy)]
pub enum SolverConfig<R: Real> {
    Euler { dt: R },
    Adaptive { method: RkMethod, atol: R, rtol: R, max_steps: usize },
}

impl<R: Real> SolverConfig<R> {
    pub fn euler(dt: R) -> Self {
        SolverConfig::Euler { dt }
    }

    pub fn rk54(rtol: R) -> Self {
        SolverConfig::Adaptive {
            method: RkMethod::Rk54,
            atol: real(DEFAULT_ATOL),
            rtol,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn rk32(rtol: R) -> Self {
        SolverConfig::Adaptive {
            method: RkMethod::Rk32,
            atol: real(DEFAULT_ATOL),
            rtol,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn with_atol(self, atol: R) -> Self {
        match self {
            SolverConfig::Euler { dt } => SolverConfig::Euler { dt },
            SolverConfig::Adaptive { method, rtol, max_steps, .. } => {
                SolverConfig::Adaptive { method, atol, rtol, max_steps }
            }
        }
    }

    /// Accuracy setting (dt or rtol) multiplied by `factor`, for the
    /// step-size sensitivity diagnostic.
    pub fn scaled(self, factor: R) -> Self {
        match self {
            SolverConfig::Euler { dt } => SolverConfig::Euler { dt: dt * factor },
            SolverConfig::Adaptive { method, atol, rtol, max_steps } => {
                SolverConfig::Adaptive { method, atol, rtol: rtol * factor, max_steps }
            }
        }
    }

    pub fn tag(&self) -> String {
        match self {
            SolverConfig::Euler { dt } => format!("euler(dt={})", as_f64(*dt)),
            SolverConfig::Adaptive { method, atol, rtol, .. } => {
                format!("{}(rtol={},atol={})", method.tag(), as_f64(*rtol), as_f64(*atol))
            }
        }
    }

    pub fn solve(
        &self,
        system: &OdeSystem<R>,
        theta: &ParamVector<R>,
        t_end: R,
    ) -> Result<Trajectory<R>> {
        match self {
            SolverConfig::Euler { dt } => {
                let cfg = FixedStepConfig::new(*dt, t_end)?;
                solve_euler(system, theta, &cfg)
            }
            SolverConfig::Adaptive { method, atol, rtol, max_steps } => {
                let tol = Tolerances::new(*atol, *rtol)?;
                let pair = RkPair::new(*method);
                solve_adaptive(system, theta, &pair, &tol, t_end, *max_steps)
            }
        }
    }
}

/// Solves the forward problem and maps the solution through the observation
/// operator at the requested times. Returns the predicted observation rows
/// and the accepted step count.
pub fn predict<R: Real>(
    system: &OdeSystem<R>,
    theta: &ParamVector<R>,
    obs: &ObservationOperator<R>,
    times: &[R],
    solver: &SolverConfig<R>,
) -> Result<(Vec<Vec<R>>, u64)> {
    let t_end = *times.last().expect("at least one observation time");
    let traj = solver.solve(system, theta, t_end)?;
    let states = sample_trajectory(&traj, times)?;
    Ok((states.iter().map(|s| obs.apply(s)).collect(), traj.n_steps()))
}

/// One likelihood evaluation under IID Gaussian noise, packaged for scans.
pub fn gaussian_point_eval<R: Real>(
    system: &OdeSystem<R>,
    theta: &ParamVector<R>,
    obs: &ObservationOperator<R>,
    data: &Dataset<R>,
    sigma: R,
    solver: &SolverConfig<R>,
) -> Result<PointEval<R>> {
    let (predicted, n_steps) = predict(system, theta, obs, data.times(), solver)?;
    let noise = GaussianIidNoise::new(sigma)?;
    let ll = log_likelihood_gaussian(data, &predicted, &noise)?;
    Ok(PointEval { ll, n_steps })
}
