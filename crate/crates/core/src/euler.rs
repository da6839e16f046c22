//! Forward Euler integration with a uniform step size.
//!
//! The grid is `t0, t0+Δt, ...` up to and including `t_end`; when the span is
//! not an integer multiple of Δt, one shortened final step lands exactly on
//! `t_end`. Interpolation between grid points is piecewise linear, matching
//! the solver's first-order accuracy.

use crate::error::{Error, Result};
use crate::ode::{DenseOutput, OdeSystem, ParamVector, Trajectory};
use crate::{as_f64, real, Real};

/// Uniform-step solve settings.
#[derive(Debug, Clone, Copy)]
pub struct FixedStepConfig<R: Real> {
    pub dt: R,
    pub t_end: R,
}

impl<R: Real> FixedStepConfig<R> {
    pub fn new(dt: R, t_end: R) -> Result<Self> {
        if !(dt.is_finite() && dt > R::zero()) {
            return Err(Error::Invalid("dt must be finite and positive".into()));
        }
        if !t_end.is_finite() {
            return Err(Error::Invalid("t_end must be finite".into()));
        }
        Ok(Self { dt, t_end })
    }
}

fn euler_grid<R: Real>(t0: R, cfg: &FixedStepConfig<R>) -> Result<Vec<R>> {
    let span = cfg.t_end - t0;
    if !(span > R::zero()) {
        return Err(Error::Invalid("t_end must exceed t0".into()));
    }
    let ratio = span / cfg.dt;
    if !ratio.is_finite() {
        return Err(Error::Invalid("(t_end - t0)/dt is not finite".into()));
    }
    // Snap to an integer step count when the span is a multiple of dt up to
    // rounding, so commensurate grids do not grow a spurious final sliver.
    let mut n_full = ratio.floor();
    if ratio - n_full > real::<R>(1.0 - 1e-9) {
        n_full = n_full + R::one();
    }
    let n_full = n_full
        .to_usize()
        .ok_or_else(|| Error::Invalid("step count overflows usize".into()))?;
    let mut times = Vec::with_capacity(n_full + 2);
    for k in 0..=n_full {
        times.push(t0 + R::from_usize(k).expect("step index fits scalar") * cfg.dt);
    }
    let last = *times.last().expect("grid is non-empty");
    if cfg.t_end - last > cfg.dt * real::<R>(1e-9) {
        times.push(cfg.t_end);
    } else {
        *times.last_mut().expect("grid is non-empty") = cfg.t_end;
    }
    Ok(times)
}

/// Integrates with `x_{n+1} = x_n + Δt · h(t_n, x_n, θ)`.
pub fn solve_euler<R: Real>(
    system: &OdeSystem<R>,
    theta: &ParamVector<R>,
    cfg: &FixedStepConfig<R>,
) -> Result<Trajectory<R>> {
    let times = euler_grid(system.t0(), cfg)?;
    let dim = system.dim();
    let mut states = Vec::with_capacity(times.len());
    states.push(system.x0().to_vec());
    let mut deriv = vec![R::zero(); dim];
    for w in times.windows(2) {
        let (t, t_next) = (w[0], w[1]);
        let h = t_next - t;
        let current = states.last().expect("at least the initial state is present");
        system.rhs_into(t, current, theta, &mut deriv);
        let next: Vec<R> = current.iter().zip(&deriv).map(|(&x, &d)| x + h * d).collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t: as_f64(t_next) });
        }
        states.push(next);
    }
    Ok(Trajectory::new(times, states, DenseOutput::PiecewiseLinear, 0))
}

/// Max-over-grid, component-wise max absolute deviation from a known
/// closed-form solution. Supports convergence-order testing.
pub fn euler_global_error<R: Real>(
    system: &OdeSystem<R>,
    theta: &ParamVector<R>,
    cfg: &FixedStepConfig<R>,
    exact: impl Fn(R) -> Vec<R>,
) -> Result<R> {
    let traj = solve_euler(system, theta, cfg)?;
    let mut worst = R::zero();
    for (t, state) in traj.times().iter().zip(traj.states()) {
        let truth = exact(*t);
        for (x, y) in state.iter().zip(&truth) {
            let err = (*x - *y).abs();
            if err > worst {
                worst = err;
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::sample_trajectory;

    fn decay() -> OdeSystem<f64> {
        OdeSystem::<f64>::new(1, 0.0, vec![1.0], Box::new(|_t, x, _p, out| out[0] = -x[0])).unwrap()
    }

    fn empty_theta() -> ParamVector<f64> {
        ParamVector::new(vec![]).unwrap()
    }

    #[test]
    fn one_step_of_linear_decay() {
        let cfg = FixedStepConfig::new(0.1, 0.1).unwrap();
        let traj = solve_euler(&decay(), &empty_theta(), &cfg).unwrap();
        assert_eq!(traj.states()[1][0], 0.9);
        assert_eq!(traj.n_steps(), 1);
        assert_eq!(traj.n_rejected(), 0);
    }

    #[test]
    fn exact_for_constant_rhs() {
        let sys = OdeSystem::<f64>::new(1, 0.0, vec![0.0], Box::new(|_t, _x, _p, out| out[0] = 1.0)).unwrap();
        let cfg = FixedStepConfig::new(0.13, 1.0).unwrap();
        let traj = solve_euler(&sys, &empty_theta(), &cfg).unwrap();
        for (t, s) in traj.times().iter().zip(traj.states()) {
            assert!((s[0] - t).abs() < 1e-14);
        }
        assert_eq!(traj.t_end(), 1.0);
    }

    #[test]
    fn oscillator_two_half_steps_by_hand() {
        // x'' = F - c x' - k x with m=1, c=0.2, k=1, F=1, x0=(0,0):
        // step 1: (0,0) + 0.5*(0, 1)          = (0, 0.5)
        // step 2: (0, 0.5) + 0.5*(0.5, 0.9)   = (0.25, 0.95)
        let sys = OdeSystem::<f64>::new(
            2,
            0.0,
            vec![0.0, 0.0],
            Box::new(|_t, x, _p, out| {
                out[0] = x[1];
                out[1] = 1.0 - 0.2 * x[1] - 1.0 * x[0];
            }),
        )
        .unwrap();
        let cfg = FixedStepConfig::new(0.5, 1.0).unwrap();
        let traj = solve_euler(&sys, &empty_theta(), &cfg).unwrap();
        assert_eq!(traj.states()[2], vec![0.25, 0.95]);
    }

    #[test]
    fn shortened_final_step_hits_t_end() {
        let cfg = FixedStepConfig::new(0.4, 1.0).unwrap();
        let traj = solve_euler(&decay(), &empty_theta(), &cfg).unwrap();
        assert_eq!(traj.times().len(), 4); // 0, 0.4, 0.8, 1.0
        assert_eq!(traj.t_end(), 1.0);
    }

    #[test]
    fn commensurate_grid_has_no_sliver() {
        // 1.0 / 0.1 is 9.999... in floating point; the grid must still have
        // exactly 11 points ending at 1.0.
        let cfg = FixedStepConfig::new(0.1, 1.0).unwrap();
        let traj = solve_euler(&decay(), &empty_theta(), &cfg).unwrap();
        assert_eq!(traj.times().len(), 11);
        assert_eq!(traj.t_end(), 1.0);
    }

    #[test]
    fn first_order_convergence_on_decay() {
        let theta = empty_theta();
        let exact = |t: f64| vec![(-t).exp()];
        let mut errors = Vec::new();
        for dt in [1e-2, 5e-3, 1e-3, 5e-4] {
            let cfg = FixedStepConfig::new(dt, 1.0).unwrap();
            errors.push(euler_global_error(&decay(), &theta, &cfg, exact).unwrap());
        }
        assert!(errors.windows(2).all(|w| w[1] < w[0]), "error not monotone: {errors:?}");
        let ratio_a = errors[0] / errors[1];
        let ratio_b = errors[2] / errors[3];
        assert!((1.8..=2.2).contains(&ratio_a), "ratio {ratio_a}");
        assert!((1.8..=2.2).contains(&ratio_b), "ratio {ratio_b}");
    }

    #[test]
    fn divergence_reports_failing_time() {
        // x' = x^2 from x0=3 with a huge step blows up quickly.
        let sys = OdeSystem::<f64>::new(1, 0.0, vec![3.0], Box::new(|_t, x, _p, out| out[0] = x[0] * x[0] * 1e150)).unwrap();
        let cfg = FixedStepConfig::new(1.0, 5.0).unwrap();
        match solve_euler(&sys, &empty_theta(), &cfg) {
            Err(Error::Divergence { t }) => assert!(t > 0.0),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_repeat() {
        let cfg = FixedStepConfig::new(0.01, 1.0).unwrap();
        let a = solve_euler(&decay(), &empty_theta(), &cfg).unwrap();
        let b = solve_euler(&decay(), &empty_theta(), &cfg).unwrap();
        assert_eq!(a.states(), b.states());
        assert_eq!(a.times(), b.times());
    }

    #[test]
    fn linear_solution_sampled_exactly_at_midpoints() {
        let sys = OdeSystem::<f64>::new(1, 0.0, vec![0.0], Box::new(|_t, _x, _p, out| out[0] = 1.0)).unwrap();
        let cfg = FixedStepConfig::new(0.25, 1.0).unwrap();
        let traj = solve_euler(&sys, &empty_theta(), &cfg).unwrap();
        let queries = [0.125, 0.375, 0.625, 0.875];
        let sampled = sample_trajectory(&traj, &queries).unwrap();
        for (q, s) in queries.iter().zip(&sampled) {
            assert!((s[0] - q).abs() < 1e-12);
        }
    }
}
