//! Shared fixtures for the integration and acceptance suites: the paper's
//! oscillator setups and independent closed-form oracles.

#![allow(dead_code)]

use odeinfer::experiment::{predict, SolverConfig};
use odeinfer::likelihood::{synth_gaussian_dataset, Dataset, ObservationOperator};
use odeinfer::models::oscillator::{oscillator_system, ForcingSpec, OscillatorParams};
use odeinfer::ode::ParamVector;
use odeinfer::surface::param_grid;

/// True oscillator parameters used throughout the experiments.
pub fn true_params() -> OscillatorParams<f64> {
    OscillatorParams::new(1.0, 0.2, 1.0).unwrap()
}

/// Closed-form solution of `m x'' + c x' + k x = F` (constant F) from rest,
/// valid in the underdamped regime c² < 4mk. Returns (x, ẋ).
pub fn underdamped_constant_forcing(p: &OscillatorParams<f64>, force: f64, t: f64) -> (f64, f64) {
    let omega0 = (p.k / p.m).sqrt();
    let zeta = p.c / (2.0 * (p.k * p.m).sqrt());
    assert!(zeta < 1.0, "oracle only valid in the underdamped regime");
    let omega_d = omega0 * (1.0 - zeta * zeta).sqrt();
    let amp = force / p.k;
    let decay = (-zeta * omega0 * t).exp();
    let x = amp * (1.0 - decay * ((omega_d * t).cos() + zeta * omega0 / omega_d * (omega_d * t).sin()));
    let v = amp * omega0 * omega0 / omega_d * decay * (omega_d * t).sin();
    (x, v)
}

/// Synthetic dataset generated the way the experiments describe: clean
/// signal from RK5(4) at rtol 1e-8, plus seeded IID Gaussian noise.
pub fn oscillator_dataset(
    forcing: ForcingSpec<f64>,
    sigma: f64,
    t_end: f64,
    n_points: usize,
    seed: u64,
    full_state: bool,
) -> Dataset<f64> {
    let system = oscillator_system(forcing);
    let times = param_grid(0.0, t_end, n_points).unwrap();
    let obs = if full_state {
        ObservationOperator::Identity
    } else {
        ObservationOperator::Component(0)
    };
    let (clean, _) = predict(
        &system,
        &true_params().theta(),
        &obs,
        &times,
        &SolverConfig::rk54(1e-8),
    )
    .unwrap();
    synth_gaussian_dataset(&times, &clean, sigma, seed).unwrap()
}

/// θ = [m, c, k] with one entry replaced.
pub fn theta_with(index: usize, value: f64) -> ParamVector<f64> {
    true_params().theta().with_value(index, value).unwrap()
}
