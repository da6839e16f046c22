//! Dev probe: compact sweep on the hard accurate-solver side.

use odeinfer::experiment::{gaussian_point_eval, predict, SolverConfig};
use odeinfer::inference::{run_adaptive_metropolis, ChainInit, McmcConfig, Prior};
use odeinfer::likelihood::{synth_gaussian_dataset, Dataset, ObservationOperator};
use odeinfer::models::oscillator::{oscillator_system, ForcingSpec, OscillatorParams};
use odeinfer::ode::{OdeSystem, ParamVector};
use odeinfer::surface::param_grid;

fn data(seed: u64) -> Dataset<f64> {
    let truth = OscillatorParams::new(1.0, 0.2, 1.0).unwrap().theta();
    let sys = oscillator_system(ForcingSpec::Step { f1: -1.0, t_change: 25.0 });
    let times = param_grid(0.0, 50.0, 75).unwrap();
    let (clean, _) = predict(&sys, &truth, &ObservationOperator::Component(0), &times, &SolverConfig::rk54(1e-8)).unwrap();
    synth_gaussian_dataset(&times, &clean, 0.01, seed).unwrap()
}

fn ll_for<'a>(sys: &'a OdeSystem<f64>, data: &'a Dataset<f64>, solver: SolverConfig<f64>) -> impl Fn(&ParamVector<f64>) -> f64 + Sync + 'a {
    move |theta: &ParamVector<f64>| {
        let model_theta = ParamVector::new(theta.as_slice()[..3].to_vec()).unwrap();
        let sigma = theta[3];
        if sigma <= 0.0 { return f64::NEG_INFINITY; }
        match gaussian_point_eval(sys, &model_theta, &ObservationOperator::Component(0), data, sigma, &solver) {
            Ok(p) => p.ll,
            Err(_) => f64::NEG_INFINITY,
        }
    }
}

fn main() {
    let _astart: usize = 400;
    let sys = oscillator_system(ForcingSpec::Step { f1: -1.0, t_change: 25.0 });
    let priors = vec![
        Prior::uniform(0.1, 1.5).unwrap(),
        Prior::uniform(0.1, 1.5).unwrap(),
        Prior::uniform(0.1, 1.5).unwrap(),
        Prior::uniform(0.0, 1.0).unwrap(),
    ];
    for data_seed in [42u64, 2024, 777] {
        let d = data(data_seed);
        let rt: f64 = std::env::var("DEV_RTOL").ok().and_then(|v| v.parse().ok()).unwrap_or(1e-8);
        let solver = SolverConfig::rk54(rt);
        let ll = ll_for(&sys, &d, solver);
        let mut above = 0;
        for seed in (0..100u64).step_by(10) {
            let mut cfg = McmcConfig::new(3, 1500, seed);
            cfg.adaptation_start = 400;
            cfg.target_acceptance = std::env::var("DEV_TARGET").ok().and_then(|v| v.parse().ok()).unwrap_or(0.4);
            cfg.burn_in = 850;
            let chains = run_adaptive_metropolis(&ll, &priors, &cfg, &ChainInit::FromPrior).unwrap();
            if chains.r_hat(0).unwrap() > 1.05 { above += 1 }
        }
        print!("  data{data_seed}: {above}/10 above;");
    }
    println!();
}
