//! SIR changepoint model of daily reported cases.
//!
//! The compartment equations are iterated as a discrete map
//!
//! ```text
//! S_t = S_{t-1} − λ(t)·Δt·S_{t-1}·I_{t-1}/N
//! I_t = I_{t-1} + λ(t)·Δt·S_{t-1}·I_{t-1}/N − μ·Δt·I_{t-1}
//! R_t = R_{t-1} + μ·Δt·I_{t-1}
//! ```
//!
//! with a piecewise-linear time-varying spreading rate λ(t), a reporting
//! delay of D days, and a weekly modulation of reported cases. The map is
//! mathematically identical to Forward Euler at the stated Δt; it is kept
//! as a discrete map so the delay indexing stays in integer substeps.

use crate::error::{Error, Result};
use crate::ode::ParamVector;
use crate::{as_f64, real, Real};

/// Full parameter set of the changepoint model (σ excluded; the noise scale
/// belongs to the likelihood).
#[derive(Debug, Clone, Copy)]
pub struct SirChangepointParams<R: Real> {
    /// Spreading rates before/after each change point: λ0..λ3.
    pub lambda: [R; 4],
    /// Times at which λ begins to shift: t1 < t2 < t3 expected.
    pub t_change: [R; 3],
    /// Durations of the linear shifts: d1..d3.
    pub durations: [R; 3],
    /// Recovery rate μ.
    pub mu: R,
    /// Reporting delay D in days.
    pub delay: R,
    /// Initially infected I(0).
    pub i0: R,
    /// Weekly modulation amplitude f_w ∈ [0, 1].
    pub f_w: R,
    /// Weekly modulation phase Φ_w.
    pub phi_w: R,
    /// Population size N.
    pub n_pop: R,
}

impl<R: Real> SirChangepointParams<R> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: [R; 4],
        t_change: [R; 3],
        durations: [R; 3],
        mu: R,
        delay: R,
        i0: R,
        f_w: R,
        phi_w: R,
        n_pop: R,
    ) -> Result<Self> {
        if lambda.iter().any(|l| !(l.is_finite() && *l >= R::zero())) {
            return Err(Error::Invalid("spreading rates must be finite and nonnegative".into()));
        }
        if durations.iter().any(|d| !(d.is_finite() && *d > R::zero())) {
            return Err(Error::Invalid("change durations must be positive".into()));
        }
        if !(mu.is_finite() && mu > R::zero()) {
            return Err(Error::Invalid("recovery rate must be positive".into()));
        }
        if !(delay.is_finite() && delay >= R::zero()) {
            return Err(Error::Invalid("reporting delay must be nonnegative".into()));
        }
        if !(i0.is_finite() && i0 > R::zero()) {
            return Err(Error::Invalid("initial infected count must exceed zero".into()));
        }
        if !(f_w >= R::zero() && f_w <= R::one()) {
            return Err(Error::Invalid("weekly modulation amplitude must lie in [0, 1]".into()));
        }
        if !(n_pop.is_finite() && n_pop > R::zero()) {
            return Err(Error::Invalid("population must be positive".into()));
        }
        Ok(Self { lambda, t_change, durations, mu, delay, i0, f_w, phi_w, n_pop })
    }

    /// Unordered change points are allowed (the prior may propose them) but
    /// worth surfacing to the user.
    pub fn ordering_warning(&self) -> Option<String> {
        if self.t_change[0] < self.t_change[1] && self.t_change[1] < self.t_change[2] {
            None
        } else {
            Some(format!(
                "change points are not ordered: t1={}, t2={}, t3={}",
                self.t_change[0], self.t_change[1], self.t_change[2]
            ))
        }
    }

    /// Reads `[λ0, λ1, λ2, λ3, t1, t2, t3, d1, d2, d3, μ, D, I0, f_w, Φ_w, σ]`
    /// and returns the model parameters together with the noise scale σ.
    pub fn from_theta(theta: &ParamVector<R>, n_pop: R) -> Result<(Self, R)> {
        if theta.len() != 16 {
            return Err(Error::DimensionMismatch { expected: 16, got: theta.len() });
        }
        let p = Self::new(
            [theta[0], theta[1], theta[2], theta[3]],
            [theta[4], theta[5], theta[6]],
            [theta[7], theta[8], theta[9]],
            theta[10],
            theta[11],
            theta[12],
            theta[13],
            theta[14],
            n_pop,
        )?;
        Ok((p, theta[15]))
    }

    pub fn to_theta(&self, sigma: R) -> ParamVector<R> {
        ParamVector::new(vec![
            self.lambda[0],
            self.lambda[1],
            self.lambda[2],
            self.lambda[3],
            self.t_change[0],
            self.t_change[1],
            self.t_change[2],
            self.durations[0],
            self.durations[1],
            self.durations[2],
            self.mu,
            self.delay,
            self.i0,
            self.f_w,
            self.phi_w,
            sigma,
        ])
        .expect("finite params")
    }

    /// Copy with every change time shifted by `offset` days, for running the
    /// map on a simulation axis that starts before the data.
    pub fn shifted_by(&self, offset: R) -> Self {
        let mut p = *self;
        for t in &mut p.t_change {
            *t = *t + offset;
        }
        p
    }
}

/// Piecewise-linear spreading rate: constant λ_i plateaus connected by
/// linear transitions of duration d_i starting at t_i. Continuous in t.
pub fn sir_lambda<R: Real>(t: R, p: &SirChangepointParams<R>) -> R {
    let mut value = p.lambda[0];
    for j in 0..3 {
        let start = p.t_change[j];
        let end = start + p.durations[j];
        let (from, to) = (p.lambda[j], p.lambda[j + 1]);
        if t < start {
            return value;
        }
        if t < end {
            return from + (to - from) / p.durations[j] * (t - start);
        }
        value = to;
    }
    value
}

/// Basic reproduction number λ/μ.
pub fn sir_r0<R: Real>(lambda: R, mu: R) -> Result<R> {
    if !(mu > R::zero()) {
        return Err(Error::Invalid("recovery rate must be positive".into()));
    }
    Ok(lambda / mu)
}

/// Weekly reporting modulation `f(t) = (1 − f_w)(1 − |sin(πt/7 − Φ_w/2)|)`.
pub fn weekly_modulation<R: Real>(t: R, f_w: R, phi_w: R) -> R {
    let pi = real::<R>(std::f64::consts::PI);
    let seven = real::<R>(7.0);
    let half = real::<R>(0.5);
    (R::one() - f_w) * (R::one() - (pi * t / seven - half * phi_w).sin().abs())
}

/// Daily output of the discrete SIR map.
#[derive(Debug, Clone)]
pub struct SirDaily<R: Real> {
    /// Compartments at day boundaries 0..=horizon.
    pub s: Vec<R>,
    pub i: Vec<R>,
    pub r: Vec<R>,
    /// New infections per day; index d holds S_(d−1) − S_d, index 0 is 0.
    pub i_new: Vec<R>,
    /// Reported cases per day after delay and weekly modulation.
    pub cases: Vec<R>,
    /// Days whose delayed infection window precedes the simulation start.
    pub leading_edge: Vec<bool>,
    /// Set when a compartment went negative and was clamped to zero.
    pub clamped: bool,
}

/// Iterates the discrete map with substep `dt` (1/dt must be an integer) and
/// assembles daily reported cases.
pub fn sir_simulate<R: Real>(
    p: &SirChangepointParams<R>,
    dt: R,
    horizon_days: usize,
) -> Result<SirDaily<R>> {
    if horizon_days == 0 {
        return Err(Error::Invalid("horizon must be at least one day".into()));
    }
    if !(dt > R::zero() && dt <= R::one()) {
        return Err(Error::Invalid("dt must lie in (0, 1]".into()));
    }
    let spd_real = (R::one() / dt).round();
    if ((R::one() / dt) - spd_real).abs() > real(1e-9) {
        return Err(Error::Invalid("1/dt must be a positive integer".into()));
    }
    let spd = spd_real.to_usize().ok_or_else(|| Error::Invalid("too many substeps per day".into()))?;
    let n_sub = horizon_days * spd;
    let delay_sub_real = (p.delay / dt).round();
    let delay_sub = delay_sub_real
        .to_isize()
        .ok_or_else(|| Error::Invalid("reporting delay out of range".into()))?;

    let mut s = p.n_pop - p.i0;
    let mut i = p.i0;
    let mut r = R::zero();
    let mut clamped = false;

    let mut s_sub = Vec::with_capacity(n_sub + 1);
    s_sub.push(s);
    let mut s_day = Vec::with_capacity(horizon_days + 1);
    let mut i_day = Vec::with_capacity(horizon_days + 1);
    let mut r_day = Vec::with_capacity(horizon_days + 1);
    s_day.push(s);
    i_day.push(i);
    r_day.push(r);

    for n in 0..n_sub {
        let t_next = R::from_usize(n + 1).expect("substep index fits scalar") * dt;
        let lam = sir_lambda(t_next, p);
        let infections = lam * dt * s * i / p.n_pop;
        let recoveries = p.mu * dt * i;
        s = s - infections;
        i = i + infections - recoveries;
        r = r + recoveries;
        if !(s.is_finite() && i.is_finite() && r.is_finite()) {
            return Err(Error::Divergence { t: as_f64(t_next) });
        }
        if s < R::zero() || i < R::zero() || r < R::zero() {
            clamped = true;
            s = s.max(R::zero());
            i = i.max(R::zero());
            r = r.max(R::zero());
        }
        s_sub.push(s);
        if (n + 1) % spd == 0 {
            s_day.push(s);
            i_day.push(i);
            r_day.push(r);
        }
    }

    let mut i_new = vec![R::zero(); horizon_days + 1];
    for d in 1..=horizon_days {
        i_new[d] = s_day[d - 1] - s_day[d];
    }

    let mut cases = vec![R::zero(); horizon_days + 1];
    let mut leading_edge = vec![false; horizon_days + 1];
    for d in 0..=horizon_days {
        let end = (d * spd) as isize - delay_sub;
        let start = end - spd as isize;
        if start < 0 {
            leading_edge[d] = true;
            continue;
        }
        let window = s_sub[start as usize] - s_sub[end as usize];
        let t_day = R::from_usize(d).expect("day index fits scalar");
        cases[d] = (R::one() - weekly_modulation(t_day, p.f_w, p.phi_w)) * window;
    }

    Ok(SirDaily { s: s_day, i: i_day, r: r_day, i_new, cases, leading_edge, clamped })
}
