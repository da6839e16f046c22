//! Dev probe: what a slow-arriving chain is doing.

use odeinfer::experiment::{gaussian_point_eval, predict, SolverConfig};
use odeinfer::inference::{run_adaptive_metropolis, ChainInit, McmcConfig, Prior};
use odeinfer::likelihood::{synth_gaussian_dataset, Dataset, ObservationOperator};
use odeinfer::models::oscillator::{oscillator_system, ForcingSpec, OscillatorParams};
use odeinfer::ode::ParamVector;
use odeinfer::surface::param_grid;

fn data(seed: u64) -> Dataset<f64> {
    let truth = OscillatorParams::new(1.0, 0.2, 1.0).unwrap().theta();
    let sys = oscillator_system(ForcingSpec::Step { f1: -1.0, t_change: 25.0 });
    let times = param_grid(0.0, 50.0, 75).unwrap();
    let (clean, _) = predict(&sys, &truth, &ObservationOperator::Component(0), &times, &SolverConfig::rk54(1e-8)).unwrap();
    synth_gaussian_dataset(&times, &clean, 0.01, seed).unwrap()
}

fn main() {
    let data = data(42);
    let sys = oscillator_system(ForcingSpec::Step { f1: -1.0, t_change: 25.0 });
    let solver = SolverConfig::rk54(1e-8);
    let ll = move |theta: &ParamVector<f64>| {
        let model_theta = ParamVector::new(theta.as_slice()[..3].to_vec()).unwrap();
        let sigma = theta[3];
        if sigma <= 0.0 { return f64::NEG_INFINITY; }
        match gaussian_point_eval(&sys, &model_theta, &ObservationOperator::Component(0), &data, sigma, &solver) {
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
    // data 42 / seed 0 / chain 2 arrived at 1142
    let mut cfg = McmcConfig::new(3, 1500, 0);
    cfg.adaptation_start = 300;
    cfg.burn_in = 1000;
    let chains = run_adaptive_metropolis(&ll, &priors, &cfg, &ChainInit::FromPrior).unwrap();
    let c = &chains.chains[2];
    println!("iter |     lp     | lambda  |   m     c     k     sigma");
    for it in (0..1500).step_by(60) {
        let s = &c.samples[it];
        println!(
            "{it:5} | {:10.1} | {:7.1e} | {:.3} {:.3} {:.3} {:.4}",
            c.log_posts[it], c.scale_trace[it], s[0], s[1], s[2], s[3]
        );
    }
}
