//! Five-store rainfall-runoff model driven by daily precipitation and
//! evaporation series.
//!
//! States: interception storage S_i, unsaturated storage S_u, slow reservoir
//! S_s, fast reservoir S_f, and cumulative river discharge z. The observed
//! quantity is the streamflow dz/dt = S_s/K_s + S_f/K_f.
//!
//! Forcing is piecewise-constant per day — exactly the rapid-RHS-change
//! regime that stresses adaptive solvers — with an optional tanh smoothing
//! of the day boundaries for experiments.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ode::{OdeSystem, ParamVector};
use crate::{real, Real};

/// Flux-shape constant α_i for interception (fixed).
pub const ALPHA_I: f64 = 50.0;
/// Flux-shape constant α_s for percolation (fixed; the flux is linear).
pub const ALPHA_S: f64 = 0.0;

/// The seven free parameters. θ layout:
/// `[I_max, S_u_max, Q_s_max, α_e, α_f, K_s, K_f]`.
#[derive(Debug, Clone, Copy)]
pub struct HydroParams<R: Real> {
    pub i_max: R,
    pub s_u_max: R,
    pub q_s_max: R,
    pub alpha_e: R,
    pub alpha_f: R,
    pub k_s: R,
    pub k_f: R,
}

impl<R: Real> HydroParams<R> {
    pub fn new(i_max: R, s_u_max: R, q_s_max: R, alpha_e: R, alpha_f: R, k_s: R, k_f: R) -> Result<Self> {
        for (name, v) in [("I_max", i_max), ("S_u_max", s_u_max), ("K_s", k_s), ("K_f", k_f)] {
            if !(v.is_finite() && v > R::zero()) {
                return Err(Error::Invalid(format!("{name} must be positive")));
            }
        }
        if !(q_s_max.is_finite() && q_s_max >= R::zero()) {
            return Err(Error::Invalid("Q_s_max must be nonnegative".into()));
        }
        if !alpha_e.is_finite() || !alpha_f.is_finite() {
            return Err(Error::Invalid("flux shapes must be finite".into()));
        }
        Ok(Self { i_max, s_u_max, q_s_max, alpha_e, alpha_f, k_s, k_f })
    }

    pub fn theta(&self) -> ParamVector<R> {
        ParamVector::new(vec![
            self.i_max, self.s_u_max, self.q_s_max, self.alpha_e, self.alpha_f, self.k_s, self.k_f,
        ])
        .expect("finite params")
    }

    pub fn from_theta(theta: &ParamVector<R>) -> Result<Self> {
        if theta.len() < 7 {
            return Err(Error::DimensionMismatch { expected: 7, got: theta.len() });
        }
        Self::new(theta[0], theta[1], theta[2], theta[3], theta[4], theta[5], theta[6])
    }
}

pub const HYDRO_PARAM_NAMES: [&str; 7] =
    ["i_max", "s_u_max", "q_s_max", "alpha_e", "alpha_f", "k_s", "k_f"];

/// Nonlinear flux function `f(S, a) = (1 − e^(−aS)) / (1 − e^(−a))`,
/// with the a → 0 limit `f(S, 0) = S`.
pub fn hydro_flux<R: Real>(s: R, a: R) -> R {
    if a == R::zero() {
        s
    } else {
        (-a * s).exp_m1() / (-a).exp_m1()
    }
}

/// Daily forcing series; values are held constant over each day.
#[derive(Debug, Clone)]
pub struct HydroForcing<R: Real> {
    precip: Vec<R>,
    evap: Vec<R>,
    /// Optional tanh ramp width at day boundaries; `None` keeps the series
    /// piecewise constant.
    smoothing_a: Option<R>,
}

impl<R: Real> HydroForcing<R> {
    pub fn new(precip: Vec<R>, evap: Vec<R>) -> Result<Self> {
        if precip.len() != evap.len() {
            return Err(Error::DimensionMismatch { expected: precip.len(), got: evap.len() });
        }
        if precip.is_empty() {
            return Err(Error::Invalid("forcing series must be non-empty".into()));
        }
        if precip.iter().chain(&evap).any(|v| !(v.is_finite() && *v >= R::zero())) {
            return Err(Error::Invalid("forcing values must be finite and nonnegative".into()));
        }
        Ok(Self { precip, evap, smoothing_a: None })
    }

    pub fn with_smoothing(mut self, a: R) -> Result<Self> {
        if !(a.is_finite() && a > R::zero()) {
            return Err(Error::Invalid("smoothing width must be positive".into()));
        }
        self.smoothing_a = Some(a);
        Ok(self)
    }

    pub fn n_days(&self) -> usize {
        self.precip.len()
    }

    pub fn precip(&self) -> &[R] {
        &self.precip
    }

    pub fn evap(&self) -> &[R] {
        &self.evap
    }

    fn day_index(&self, t: R) -> usize {
        let d = t.floor().to_isize().unwrap_or(0).max(0) as usize;
        d.min(self.precip.len() - 1)
    }

    fn series_at(&self, series: &[R], t: R) -> R {
        let d = self.day_index(t);
        let v = series[d];
        let Some(a) = self.smoothing_a else { return v };
        // Blend with the neighbouring days through tanh ramps centred on the
        // day boundaries; for small a the two ramps never overlap.
        let half = real::<R>(0.5);
        let day_start = R::from_usize(d).expect("day index fits scalar");
        let mut value = v;
        if d > 0 {
            let prev = series[d - 1];
            value = value + (prev - v) * half * (R::one() - ((t - day_start) / a).tanh());
        }
        if d + 1 < series.len() {
            let next = series[d + 1];
            value = value + (next - v) * half * (R::one() + ((t - (day_start + R::one())) / a).tanh());
        }
        value
    }

    pub fn at(&self, t: R) -> (R, R) {
        (self.series_at(&self.precip, t), self.series_at(&self.evap, t))
    }
}

/// Streamflow observation `S_s/K_s + S_f/K_f` read off a state vector.
pub fn streamflow<R: Real>(state: &[R], k_s: R, k_f: R) -> R {
    state[2] / k_s + state[3] / k_f
}

/// Builds the five-state system. θ is read on every RHS call using the
/// [`HydroParams`] layout; α_s and α_i stay at their fixed values.
pub fn hydro_system<R: Real>(forcing: Arc<HydroForcing<R>>, x0: [R; 5]) -> OdeSystem<R> {
    OdeSystem::new(
        5,
        R::zero(),
        x0.to_vec(),
        Box::new(move |t, x, theta, out| {
            let i_max = theta[0];
            let s_u_max = theta[1];
            let q_s_max = theta[2];
            let alpha_e = theta[3];
            let alpha_f = theta[4];
            let k_s = theta[5];
            let k_f = theta[6];
            let alpha_i = real::<R>(ALPHA_I);
            let alpha_s = real::<R>(ALPHA_S);

            let (precip, evap) = forcing.at(t);
            let rel_i = x[0] / i_max;
            let rel_u = x[1] / s_u_max;

            let intercept_evap = evap * hydro_flux(rel_i, alpha_i);
            let effect_precip = precip * hydro_flux(rel_i, -alpha_i);
            let unsat_evap = (evap - intercept_evap).max(R::zero()) * hydro_flux(rel_u, alpha_e);
            let percolation = q_s_max * hydro_flux(rel_u, alpha_s);
            let runoff = effect_precip * hydro_flux(rel_u, alpha_f);
            let slow = x[2] / k_s;
            let fast = x[3] / k_f;

            out[0] = precip - intercept_evap - effect_precip;
            out[1] = effect_precip - unsat_evap - percolation - runoff;
            out[2] = percolation - slow;
            out[3] = runoff - fast;
            out[4] = slow + fast;
        }),
    )
    .expect("five-state system with finite defaults")
}

/// All-zero initial storages, the documented default.
pub fn hydro_x0<R: Real>() -> [R; 5] {
    [R::zero(); 5]
}
