//! Embedded Runge-Kutta pairs with adaptive step control and dense output.
//!
//! Two pairs are provided: the Dormand-Prince 5(4) pair with a quartic
//! per-step interpolation polynomial, and the Bogacki-Shampine 3(2) pair
//! with a cubic Hermite interpolant. Both are FSAL schemes; the last stage
//! of an accepted step is reused as the first stage of the next.
//!
//! Step acceptance uses the scaled RMS local-error norm with threshold
//! `atol + rtol·|x|` per component. The controller is the standard clamped
//! rule: after each attempt the step is scaled by
//! `clamp(0.9·norm^(-1/(q+1)), 0.2, 10)`, with growth capped at 1 after a
//! rejection.

use crate::error::{Error, Result};
use crate::ode::{DenseOutput, OdeSystem, ParamVector, StepPoly, Trajectory};
use crate::{as_f64, real, Real};

/// Absolute and relative local-error tolerances.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances<R: Real> {
    pub atol: R,
    pub rtol: R,
}

/// Default absolute tolerance used throughout the experiments.
pub const DEFAULT_ATOL: f64 = 1e-9;

/// Default per-solve budget on step attempts.
pub const DEFAULT_MAX_STEPS: usize = 100_000;

impl<R: Real> Tolerances<R> {
    pub fn new(atol: R, rtol: R) -> Result<Self> {
        if !(atol.is_finite() && atol > R::zero() && rtol.is_finite() && rtol > R::zero()) {
            return Err(Error::Invalid("tolerances must be finite and positive".into()));
        }
        Ok(Self { atol, rtol })
    }

    /// `rtol` as given, `atol` fixed at the 1e-9 default.
    pub fn from_rtol(rtol: R) -> Result<Self> {
        Self::new(real(DEFAULT_ATOL), rtol)
    }
}

/// Which embedded pair to integrate with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkMethod {
    /// Dormand-Prince 5(4).
    Rk54,
    /// Bogacki-Shampine 3(2).
    Rk32,
}

impl RkMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            RkMethod::Rk54 => "rk54",
            RkMethod::Rk32 => "rk32",
        }
    }
}

/// Butcher tableau plus dense-output coefficients for an embedded pair.
///
/// Conventions: `a` is the full square stage matrix with the last row equal
/// to the high-order weights (FSAL), `b_high` are the advancing weights,
/// `b_low` the embedded error-estimation weights, and `dense[s][j]` maps
/// stage `s` to the θ^(j+1) coefficient of the interpolation polynomial.
#[derive(Debug, Clone)]
pub struct RkPair<R: Real> {
    pub name: RkMethod,
    pub c: Vec<R>,
    pub a: Vec<Vec<R>>,
    pub b_high: Vec<R>,
    pub b_low: Vec<R>,
    pub order_high: u32,
    pub order_low: u32,
    pub dense: Vec<Vec<R>>,
}

impl<R: Real> RkPair<R> {
    pub fn new(method: RkMethod) -> Self {
        let pair = match method {
            RkMethod::Rk54 => Self::dormand_prince(),
            RkMethod::Rk32 => Self::bogacki_shampine(),
        };
        debug_assert!(pair.check_consistency() < 1e-12);
        pair
    }

    /// Local-error exponent −1/(q+1) for the clamped controller.
    pub fn error_exponent(&self) -> R {
        -R::one() / real::<R>(f64::from(self.order_low) + 1.0)
    }

    pub fn n_stages(&self) -> usize {
        self.c.len()
    }

    /// Max violation of the row-sum consistency conditions: stage rows
    /// summing to their node, and both weight vectors summing to 1.
    pub fn check_consistency(&self) -> f64 {
        let mut worst = 0.0f64;
        for (row, &node) in self.a.iter().zip(&self.c) {
            let sum: R = row.iter().copied().sum();
            worst = worst.max(as_f64((sum - node).abs()));
        }
        let bh: R = self.b_high.iter().copied().sum();
        let bl: R = self.b_low.iter().copied().sum();
        worst = worst.max(as_f64((bh - R::one()).abs()));
        worst = worst.max(as_f64((bl - R::one()).abs()));
        worst
    }

    fn dormand_prince() -> Self {
        let r = real::<R>;
        let c = vec![
            r(0.0),
            r(1.0 / 5.0),
            r(3.0 / 10.0),
            r(4.0 / 5.0),
            r(8.0 / 9.0),
            r(1.0),
            r(1.0),
        ];
        let b_high = vec![
            r(35.0 / 384.0),
            r(0.0),
            r(500.0 / 1113.0),
            r(125.0 / 192.0),
            r(-2187.0 / 6784.0),
            r(11.0 / 84.0),
            r(0.0),
        ];
        let b_low = vec![
            r(5179.0 / 57600.0),
            r(0.0),
            r(7571.0 / 16695.0),
            r(393.0 / 640.0),
            r(-92097.0 / 339200.0),
            r(187.0 / 2100.0),
            r(1.0 / 40.0),
        ];
        let a = vec![
            vec![r(0.0); 7],
            pad(vec![r(1.0 / 5.0)], 7),
            pad(vec![r(3.0 / 40.0), r(9.0 / 40.0)], 7),
            pad(vec![r(44.0 / 45.0), r(-56.0 / 15.0), r(32.0 / 9.0)], 7),
            pad(
                vec![
                    r(19372.0 / 6561.0),
                    r(-25360.0 / 2187.0),
                    r(64448.0 / 6561.0),
                    r(-212.0 / 729.0),
                ],
                7,
            ),
            pad(
                vec![
                    r(9017.0 / 3168.0),
                    r(-355.0 / 33.0),
                    r(46732.0 / 5247.0),
                    r(49.0 / 176.0),
                    r(-5103.0 / 18656.0),
                ],
                7,
            ),
            b_high.clone(),
        ];
        // Quartic interpolation polynomial (same coefficients as the widely
        // used SciPy RK45 dense output).
        let dense = vec![
            vec![
                r(1.0),
                r(-8048581381.0 / 2820520608.0),
                r(8663915743.0 / 2820520608.0),
                r(-12715105075.0 / 11282082432.0),
            ],
            vec![r(0.0); 4],
            vec![
                r(0.0),
                r(131558114200.0 / 32700410799.0),
                r(-68118460800.0 / 10900136933.0),
                r(87487479700.0 / 32700410799.0),
            ],
            vec![
                r(0.0),
                r(-1754552775.0 / 470086768.0),
                r(14199869525.0 / 1410260304.0),
                r(-10690763975.0 / 1880347072.0),
            ],
            vec![
                r(0.0),
                r(127303824393.0 / 49829197408.0),
                r(-318862633887.0 / 49829197408.0),
                r(701980252875.0 / 199316789632.0),
            ],
            vec![
                r(0.0),
                r(-282668133.0 / 205662961.0),
                r(2019193451.0 / 616988883.0),
                r(-1453857185.0 / 822651844.0),
            ],
            vec![
                r(0.0),
                r(40617522.0 / 29380423.0),
                r(-110615467.0 / 29380423.0),
                r(69997945.0 / 29380423.0),
            ],
        ];
        Self {
            name: RkMethod::Rk54,
            c,
            a,
            b_high,
            b_low,
            order_high: 5,
            order_low: 4,
            dense,
        }
    }

    fn bogacki_shampine() -> Self {
        let r = real::<R>;
        let c = vec![r(0.0), r(0.5), r(0.75), r(1.0)];
        let b_high = vec![r(2.0 / 9.0), r(1.0 / 3.0), r(4.0 / 9.0), r(0.0)];
        let b_low = vec![r(7.0 / 24.0), r(1.0 / 4.0), r(1.0 / 3.0), r(1.0 / 8.0)];
        let a = vec![
            vec![r(0.0); 4],
            pad(vec![r(0.5)], 4),
            pad(vec![r(0.0), r(0.75)], 4),
            b_high.clone(),
        ];
        // Cubic Hermite interpolant expressed through the stages.
        let dense = vec![
            vec![r(1.0), r(-4.0 / 3.0), r(5.0 / 9.0)],
            vec![r(0.0), r(1.0), r(-2.0 / 3.0)],
            vec![r(0.0), r(4.0 / 3.0), r(-8.0 / 9.0)],
            vec![r(0.0), r(-1.0), r(1.0)],
        ];
        Self {
            name: RkMethod::Rk32,
            c,
            a,
            b_high,
            b_low,
            order_high: 3,
            order_low: 2,
            dense,
        }
    }
}

fn pad<R: Real>(mut row: Vec<R>, len: usize) -> Vec<R> {
    row.resize(len, R::zero());
    row
}

/// Scaled RMS local-error norm.
///
/// Returns the RMS over components of `(x_high − x_low) / (atol + rtol·max(|x_prev|, |x_high|))`;
/// the step is accepted iff the result is ≤ 1.
pub fn error_norm<R: Real>(x_high: &[R], x_low: &[R], x_prev: &[R], tol: &Tolerances<R>) -> R {
    debug_assert!(x_high.len() == x_low.len() && x_low.len() == x_prev.len());
    let n = R::from_usize(x_high.len()).expect("dimension fits scalar");
    let mut acc = R::zero();
    for ((&hi, &lo), &prev) in x_high.iter().zip(x_low).zip(x_prev) {
        let scale = tol.atol + tol.rtol * prev.abs().max(hi.abs());
        let ratio = (hi - lo) / scale;
        acc = acc + ratio * ratio;
    }
    (acc / n).sqrt()
}

/// Deterministic first-step heuristic built from `‖x0‖`, `‖h(t0, x0, θ)‖`
/// (both scaled by the tolerance) and the pair's error exponent. The result
/// is clamped to a tenth of the span; a zero state with a zero RHS falls
/// back to `1e-6·(t_end − t0)`.
pub fn initial_step<R: Real>(
    system: &OdeSystem<R>,
    theta: &ParamVector<R>,
    pair: &RkPair<R>,
    tol: &Tolerances<R>,
    t_end: R,
) -> Result<R> {
    let span = t_end - system.t0();
    if !(span > R::zero()) {
        return Err(Error::Invalid("t_end must exceed t0".into()));
    }
    let x0 = system.x0();
    let f0 = system.eval_rhs(system.t0(), x0, theta)?;
    let n = R::from_usize(x0.len()).expect("dimension fits scalar");
    let mut d0 = R::zero();
    let mut d1 = R::zero();
    for (&x, &f) in x0.iter().zip(&f0) {
        let scale = tol.atol + tol.rtol * x.abs();
        d0 = d0 + (x / scale) * (x / scale);
        d1 = d1 + (f / scale) * (f / scale);
    }
    d0 = (d0 / n).sqrt();
    d1 = (d1 / n).sqrt();
    let tiny = real::<R>(1e-5);
    let h = if d0 < tiny || d1 < tiny {
        real::<R>(1e-6) * span
    } else {
        (d0 / d1) * d0.powf(pair.error_exponent())
    };
    Ok(h.min(span / real(10.0)))
}

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

/// Integrates from `t0` to `t_end` with local-error step control.
///
/// The returned trajectory records the accepted grid, the per-step
/// interpolation polynomials, and the accepted/rejected step counts.
pub fn solve_adaptive<R: Real>(
    system: &OdeSystem<R>,
    theta: &ParamVector<R>,
    pair: &RkPair<R>,
    tol: &Tolerances<R>,
    t_end: R,
    max_steps: usize,
) -> Result<Trajectory<R>> {
    let t0 = system.t0();
    let span = t_end - t0;
    if !(span > R::zero() && t_end.is_finite()) {
        return Err(Error::Invalid("t_end must be finite and exceed t0".into()));
    }
    let dim = system.dim();
    let n_stages = pair.n_stages();
    let n_poly = pair.dense[0].len();
    let h_floor = real::<R>(1e-14) * span;

    let mut times = vec![t0];
    let mut states = vec![system.x0().to_vec()];
    let mut polys: Vec<StepPoly<R>> = Vec::new();

    let mut t = t0;
    let mut y = system.x0().to_vec();
    let mut stages = vec![vec![R::zero(); dim]; n_stages];
    stages[0] = system.eval_rhs(t0, &y, theta)?;
    if stages[0].iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence { t: as_f64(t0) });
    }

    let mut h_next = initial_step(system, theta, pair, tol, t_end)?;
    let mut n_accepted: u64 = 0;
    let mut n_rejected: u64 = 0;
    let mut y_stage = vec![R::zero(); dim];
    let mut rejected_last = false;

    while t < t_end {
        if (n_accepted + n_rejected) as usize >= max_steps {
            return Err(Error::StepBudgetExceeded { max_steps, t: as_f64(t) });
        }
        let remaining = t_end - t;
        let last_step = h_next >= remaining;
        let h = if last_step { remaining } else { h_next };
        if h < h_floor {
            return Err(Error::StepUnderflow { t: as_f64(t), h: as_f64(h) });
        }

        // Stage sweep; the final row of `a` equals b_high, so the last stage
        // is evaluated at the high-order endpoint (FSAL).
        let mut diverged = false;
        for i in 1..n_stages {
            for (d, &yv) in y_stage.iter_mut().zip(&y) {
                *d = yv;
            }
            for (j, stage) in stages.iter().enumerate().take(i) {
                let w = pair.a[i][j];
                if w != R::zero() {
                    for (d, &k) in y_stage.iter_mut().zip(stage) {
                        *d = *d + h * w * k;
                    }
                }
            }
            let t_stage = t + pair.c[i] * h;
            let (head, tail) = stages.split_at_mut(i);
            let _ = head;
            system.rhs_into(t_stage, &y_stage, theta, &mut tail[0]);
            if tail[0].iter().any(|v| !v.is_finite()) {
                diverged = true;
                break;
            }
        }
        if diverged || y_stage.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t: as_f64(t + h) });
        }
        // y_stage now holds the high-order endpoint.
        let y_high = y_stage.clone();
        let mut y_low = y.clone();
        for (s, stage) in stages.iter().enumerate() {
            let w = pair.b_low[s];
            if w != R::zero() {
                for (d, &k) in y_low.iter_mut().zip(stage) {
                    *d = *d + h * w * k;
                }
            }
        }
        let norm = error_norm(&y_high, &y_low, &y, tol);

        let raw = if norm == R::zero() {
            real::<R>(MAX_FACTOR)
        } else {
            real::<R>(SAFETY) * norm.powf(pair.error_exponent())
        };
        if norm <= R::one() {
            // Accept: attach the interpolation polynomial for this step.
            let mut coeffs = vec![vec![R::zero(); dim]; n_poly];
            for (s, stage) in stages.iter().enumerate() {
                for (j, col) in coeffs.iter_mut().enumerate() {
                    let w = pair.dense[s][j];
                    if w != R::zero() {
                        for (cc, &k) in col.iter_mut().zip(stage) {
                            *cc = *cc + h * w * k;
                        }
                    }
                }
            }
            polys.push(StepPoly { coeffs });
            t = if last_step { t_end } else { t + h };
            y = y_high;
            times.push(t);
            states.push(y.clone());
            n_accepted += 1;
            stages.swap(0, n_stages - 1);
            let cap = if rejected_last { R::one() } else { real::<R>(MAX_FACTOR) };
            h_next = h * raw.max(real(MIN_FACTOR)).min(cap);
            rejected_last = false;
        } else {
            n_rejected += 1;
            rejected_last = true;
            h_next = h * raw.max(real(MIN_FACTOR)).min(R::one());
        }
    }

    Ok(Trajectory::new(times, states, DenseOutput::PerStepPoly(polys), n_rejected))
}

/// [`solve_adaptive`] with the default step budget.
pub fn solve_rk<R: Real>(
    system: &OdeSystem<R>,
    theta: &ParamVector<R>,
    method: RkMethod,
    tol: &Tolerances<R>,
    t_end: R,
) -> Result<Trajectory<R>> {
    let pair = RkPair::new(method);
    solve_adaptive(system, theta, &pair, tol, t_end, DEFAULT_MAX_STEPS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::oscillator::{oscillator_system, ForcingSpec, OscillatorParams};

    fn empty_theta() -> ParamVector<f64> {
        ParamVector::new(vec![]).unwrap()
    }

    fn decay() -> OdeSystem<f64> {
        OdeSystem::<f64>::new(1, 0.0, vec![1.0], Box::new(|_t, x, _p, out| out[0] = -x[0])).unwrap()
    }

    #[test]
    fn tableau_consistency() {
        assert!(RkPair::<f64>::new(RkMethod::Rk54).check_consistency() < 1e-15);
        assert!(RkPair::<f64>::new(RkMethod::Rk32).check_consistency() < 1e-15);
    }

    #[test]
    fn dense_coefficients_reproduce_endpoint_weights() {
        // Row sums of the dense matrix must equal b_high so the interpolant
        // hits the accepted endpoint at theta = 1.
        for method in [RkMethod::Rk54, RkMethod::Rk32] {
            let pair = RkPair::<f64>::new(method);
            for (s, row) in pair.dense.iter().enumerate() {
                let sum: f64 = row.iter().sum();
                assert!(
                    (sum - pair.b_high[s]).abs() < 1e-12,
                    "{method:?} stage {s}: {sum} vs {}",
                    pair.b_high[s]
                );
            }
        }
    }

    #[test]
    fn error_norm_examples() {
        let tol = Tolerances::new(1e-9, 1e-3).unwrap();
        assert_eq!(error_norm(&[1.0], &[1.0], &[1.0], &tol), 0.0);
        // |x| ~ 0: difference equal to atol sits exactly on the boundary.
        let tol_b = Tolerances::new(1e-9, 1e-3).unwrap();
        let norm = error_norm(&[1e-9f64], &[0.0], &[0.0], &tol_b);
        assert!((norm - 1.0).abs() < 2e-3, "{norm}");
        // Worked scalar case from the formula.
        let norm = error_norm(&[10.002f64], &[10.001], &[10.0], &tol);
        let expect = 0.001 / (1e-9 + 1e-3 * 10.002);
        assert!((norm - expect).abs() < 1e-12);
    }

    #[test]
    fn zero_rhs_reproduces_initial_state() {
        let sys = OdeSystem::<f64>::new(2, 0.0, vec![3.0, -1.0], Box::new(|_t, _x, _p, out| {
            out[0] = 0.0;
            out[1] = 0.0;
        }))
        .unwrap();
        let tol = Tolerances::from_rtol(1e-6).unwrap();
        let traj = solve_rk(&sys, &empty_theta(), RkMethod::Rk54, &tol, 10.0).unwrap();
        assert_eq!(traj.t_end(), 10.0);
        for s in traj.states() {
            assert_eq!(s, &vec![3.0, -1.0]);
        }
        for q in [0.1, 2.5, 9.99] {
            assert_eq!(traj.sample(q).unwrap(), vec![3.0, -1.0]);
        }
        assert_eq!(traj.n_rejected(), 0);
    }

    #[test]
    fn decay_matches_analytic_solution() {
        let tol = Tolerances::from_rtol(1e-8).unwrap();
        let traj = solve_rk(&decay(), &empty_theta(), RkMethod::Rk54, &tol, 1.0).unwrap();
        let xe = traj.states().last().unwrap()[0];
        assert!((xe - (-1.0f64).exp()).abs() < 1e-7, "{xe}");
        // Dense output between nodes stays accurate too.
        for q in [0.05, 0.33, 0.77] {
            let s = traj.sample(q).unwrap()[0];
            assert!((s - (-q as f64).exp()).abs() < 1e-7);
        }
    }

    #[test]
    fn rk32_decay_accuracy() {
        let tol = Tolerances::from_rtol(1e-8).unwrap();
        let traj = solve_rk(&decay(), &empty_theta(), RkMethod::Rk32, &tol, 1.0).unwrap();
        let xe = traj.states().last().unwrap()[0];
        assert!((xe - (-1.0f64).exp()).abs() < 1e-6, "{xe}");
    }

    #[test]
    fn step_counts_add_up() {
        let params = OscillatorParams::<f64>::new(1.0, 0.2, 1.0).unwrap();
        let forcing = ForcingSpec::Step { f1: -1.0, t_change: 2.5 };
        let sys = oscillator_system(forcing);
        let tol = Tolerances::from_rtol(1e-6).unwrap();
        let traj = solve_rk(&sys, &params.theta(), RkMethod::Rk54, &tol, 5.0).unwrap();
        assert_eq!(traj.n_steps() as usize, traj.times().len() - 1);
        assert!(traj.n_rejected() > 0, "step forcing should force rejections");
    }

    #[test]
    fn tighter_tolerance_uses_more_steps() {
        let params = OscillatorParams::<f64>::new(1.0, 0.2, 1.0).unwrap();
        let forcing = ForcingSpec::Step { f1: -1.0, t_change: 2.5 };
        let sys = oscillator_system(forcing);
        let loose = solve_rk(
            &sys,
            &params.theta(),
            RkMethod::Rk54,
            &Tolerances::from_rtol(1e-3).unwrap(),
            5.0,
        )
        .unwrap();
        let tight = solve_rk(
            &sys,
            &params.theta(),
            RkMethod::Rk54,
            &Tolerances::from_rtol(1e-8).unwrap(),
            5.0,
        )
        .unwrap();
        assert!(tight.n_steps() > loose.n_steps());
    }

    #[test]
    fn dense_output_continuous_at_shared_endpoints() {
        let params = OscillatorParams::<f64>::new(1.0, 0.2, 1.0).unwrap();
        let sys = oscillator_system(ForcingSpec::Constant(1.0));
        let tol = Tolerances::from_rtol(1e-6).unwrap();
        let traj = solve_rk(&sys, &params.theta(), RkMethod::Rk54, &tol, 5.0).unwrap();
        let times = traj.times();
        for k in 1..times.len() - 1 {
            let node = times[k];
            let eps = (times[k + 1] - times[k - 1]) * 1e-10;
            let left = traj.sample(node - eps).unwrap();
            let right = traj.sample(node + eps).unwrap();
            for (l, r) in left.iter().zip(&right) {
                let scale = l.abs().max(1.0);
                assert!((l - r).abs() / scale < 1e-8, "discontinuity at node {node}");
            }
        }
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let params = OscillatorParams::<f64>::new(1.0, 0.2, 1.0).unwrap();
        let sys = oscillator_system(ForcingSpec::Step { f1: -5.0, t_change: 2.5 });
        let tol = Tolerances::from_rtol(1e-10).unwrap();
        match solve_adaptive(&sys, &params.theta(), &RkPair::new(RkMethod::Rk54), &tol, 5.0, 10) {
            Err(Error::StepBudgetExceeded { max_steps: 10, .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn divergence_is_reported() {
        // x' = x^2, x0 = 1 blows up at t = 1.
        let sys =
            OdeSystem::<f64>::new(1, 0.0, vec![1.0], Box::new(|_t, x, _p, out| out[0] = x[0] * x[0])).unwrap();
        let tol = Tolerances::from_rtol(1e-6).unwrap();
        let res = solve_rk(&sys, &empty_theta(), RkMethod::Rk54, &tol, 2.0);
        assert!(
            matches!(res, Err(Error::Divergence { .. }) | Err(Error::StepUnderflow { .. })),
            "{res:?}"
        );
    }

    #[test]
    fn initial_step_fallback_and_clamp() {
        let pair = RkPair::new(RkMethod::Rk54);
        let tol = Tolerances::from_rtol(1e-6).unwrap();
        let zero_sys = OdeSystem::<f64>::new(1, 0.0, vec![0.0], Box::new(|_t, _x, _p, out| out[0] = 0.0)).unwrap();
        let h = initial_step(&zero_sys, &empty_theta(), &pair, &tol, 2.0).unwrap();
        assert_eq!(h, 1e-6 * 2.0);

        let h = initial_step(&decay(), &empty_theta(), &pair, &tol, 1.0).unwrap();
        assert!(h > 0.0 && h <= 0.1, "{h}");
    }

    #[test]
    fn initial_step_scales_with_time_axis() {
        let pair = RkPair::new(RkMethod::Rk54);
        let tol = Tolerances::from_rtol(1e-6).unwrap();
        let slow =
            OdeSystem::<f64>::new(1, 0.0, vec![1.0], Box::new(|_t, x, _p, out| out[0] = -x[0] / 10.0)).unwrap();
        let h_base = initial_step(&decay(), &empty_theta(), &pair, &tol, 1.0).unwrap();
        let h_slow = initial_step(&slow, &empty_theta(), &pair, &tol, 10.0).unwrap();
        let ratio = h_slow / h_base;
        assert!((9.0..=11.0).contains(&ratio), "ratio {ratio}");
    }
}
