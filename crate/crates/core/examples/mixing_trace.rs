//! Dev probe: chain traces for the accurate-solver oscillator inference.

use odeinfer::experiment::{gaussian_point_eval, predict, SolverConfig};
use odeinfer::inference::{run_adaptive_metropolis, ChainInit, McmcConfig, Prior};
use odeinfer::likelihood::{synth_gaussian_dataset, Dataset, ObservationOperator};
use odeinfer::models::oscillator::{oscillator_system, ForcingSpec, OscillatorParams};
use odeinfer::ode::{OdeSystem, ParamVector};
use odeinfer::surface::param_grid;

fn data() -> Dataset<f64> {
    let truth = OscillatorParams::new(1.0, 0.2, 1.0).unwrap().theta();
    let sys = oscillator_system(ForcingSpec::Step { f1: -1.0, t_change: 25.0 });
    let times = param_grid(0.0, 50.0, 75).unwrap();
    let (clean, _) = predict(&sys, &truth, &ObservationOperator::Component(0), &times, &SolverConfig::rk54(1e-8)).unwrap();
    synth_gaussian_dataset(&times, &clean, 0.01, 777).unwrap()
}

fn main() {
    let data = data();
    let sys = oscillator_system(ForcingSpec::Step { f1: -1.0, t_change: 25.0 });
    let solver = SolverConfig::rk54(1e-8);
    let ll = move |theta: &ParamVector<f64>| {
        let model_theta = ParamVector::new(theta.as_slice()[..3].to_vec()).unwrap();
        let sigma = theta[3];
        if sigma <= 0.0 {
            return f64::NEG_INFINITY;
        }
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
    let mut cfg = McmcConfig::new(3, 1500, 3); // seed 3 was bad (2.1 / 1.6)
    cfg.adaptation_start = 100;
    let chains = run_adaptive_metropolis(&ll, &priors, &cfg, &ChainInit::FromPrior).unwrap();
    for (ci, c) in chains.chains.iter().enumerate() {
        print!("chain {ci} m-trace: ");
        for it in (0..1500).step_by(150) {
            print!("{:.4} ", c.samples[it][0]);
        }
        println!("| last {:.5} lp {:.1} scale {:.2e}", c.samples[1499][0], c.log_posts[1499], c.scale_trace[1499]);
    }
    for p in 0..4 {
        println!("param {p}: rhat {:.3}", chains.r_hat(p).unwrap());
    }
    // when do chains first reach lp within 5 of final best?
    let best: f64 = chains.chains.iter().map(|c| c.log_posts[1499]).fold(f64::MIN, f64::max);
    for (ci, c) in chains.chains.iter().enumerate() {
        let first = c.log_posts.iter().position(|&lp| lp > best - 5.0);
        println!("chain {ci}: first iter with lp > best-5: {first:?}");
    }
}
