//! Dev probe: stationary R-hat noise floor for the oscillator posterior.

use odeinfer::experiment::{gaussian_point_eval, predict, SolverConfig};
use odeinfer::inference::{run_adaptive_metropolis, ChainInit, McmcConfig, Prior};
use odeinfer::likelihood::{synth_gaussian_dataset, Dataset, ObservationOperator};
use odeinfer::models::oscillator::{oscillator_system, ForcingSpec, OscillatorParams};
use odeinfer::ode::{OdeSystem, ParamVector};
use odeinfer::surface::param_grid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn data(seed: u64) -> Dataset<f64> {
    let truth = OscillatorParams::new(1.0, 0.2, 1.0).unwrap().theta();
    let sys = oscillator_system(ForcingSpec::Step { f1: -1.0, t_change: 25.0 });
    let times = param_grid(0.0, 50.0, 75).unwrap();
    let (clean, _) = predict(&sys, &truth, &ObservationOperator::Component(0), &times, &SolverConfig::rk54(1e-8)).unwrap();
    synth_gaussian_dataset(&times, &clean, 0.01, seed).unwrap()
}

fn main() {
    let d = data(42);
    let sys = oscillator_system(ForcingSpec::Step { f1: -1.0, t_change: 25.0 });
    let solver = SolverConfig::rk54(1e-8);
    let ll = move |theta: &ParamVector<f64>| {
        let model_theta = ParamVector::new(theta.as_slice()[..3].to_vec()).unwrap();
        let sigma = theta[3];
        if sigma <= 0.0 { return f64::NEG_INFINITY; }
        match gaussian_point_eval(&sys, &model_theta, &ObservationOperator::Component(0), &d, sigma, &solver) {
            Ok(p) => p.ll,
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let priors = vec![
        Prior::uniform(0.1, 1.5).unwrap(),
        Prior::uniform(0.1, 1.5).unwrap(),
        Prior::uniform(0.1, 1.5).unwrap(),
        Prior::uniform(0.0, 1.0).unwrap(),
    ];
    for burn in [900usize] {
        let mut fails = 0;
        for seed in (0..300u64).step_by(10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
            let inits: Vec<Vec<f64>> = (0..3)
                .map(|_| {
                    vec![
                        1.0 + 0.001 * (rng.gen::<f64>() - 0.5),
                        0.2 + 0.001 * (rng.gen::<f64>() - 0.5),
                        1.0 + 0.001 * (rng.gen::<f64>() - 0.5),
                        0.01 * (1.0 + 0.1 * (rng.gen::<f64>() - 0.5)),
                    ]
                })
                .collect();
            let mut cfg = McmcConfig::new(3, 1500, seed);
            cfg.adaptation_start = std::env::var("DEV_ASTART").ok().and_then(|v| v.parse().ok()).unwrap_or(200);
            cfg.burn_in = burn;
            let chains =
                run_adaptive_metropolis(&ll, &priors, &cfg, &ChainInit::Explicit(inits)).unwrap();
            if chains.r_hat(0).unwrap() > 1.05 {
                fails += 1;
            }
        }
        println!("burn={burn}: stationary-start R>1.05 in {fails}/30");
    }
}
