//! Dev probe: acceptance-criterion seed robustness for the Fig. 2 and
//! Fig. S1 scan setups.

use odeinfer::experiment::{gaussian_point_eval, predict, SolverConfig};
use odeinfer::likelihood::{synth_gaussian_dataset, Dataset, ObservationOperator};
use odeinfer::models::oscillator::{oscillator_system, ForcingSpec, OscillatorParams};
use odeinfer::ode::ParamVector;
use odeinfer::surface::{jaggedness, param_grid, scan_likelihood};

fn truth() -> ParamVector<f64> {
    OscillatorParams::new(1.0, 0.2, 1.0).unwrap().theta()
}

fn dataset(forcing: ForcingSpec<f64>, sigma: f64, t_end: f64, n: usize, seed: u64) -> Dataset<f64> {
    let sys = oscillator_system(forcing);
    let times = param_grid(0.0, t_end, n).unwrap();
    let (clean, _) = predict(&sys, &truth(), &ObservationOperator::Component(0), &times, &SolverConfig::rk54(1e-8)).unwrap();
    synth_gaussian_dataset(&times, &clean, sigma, seed).unwrap()
}

fn maxima(
    model_forcing: ForcingSpec<f64>,
    data: &Dataset<f64>,
    sigma: f64,
    solver: SolverConfig<f64>,
    lo: f64,
    hi: f64,
    n: usize,
) -> (usize, f64) {
    let sys = oscillator_system(model_forcing);
    let obs = ObservationOperator::Component(0);
    let grid = param_grid(lo, hi, n).unwrap();
    let eval = |theta: &ParamVector<f64>| gaussian_point_eval(&sys, theta, &obs, data, sigma, &solver);
    let s = scan_likelihood(&eval, &truth(), 2, &grid, "probe").unwrap();
    let rep = jaggedness(&s).unwrap();
    (rep.n_local_maxima, rep.max_abs_jump)
}

fn main() {
    let f2 = ForcingSpec::Step { f1: 0.9, t_change: 25.0 };
    println!("fig2 seed sweep (euler maxima / rk54@0.00944 maxima):");
    for seed in 1..=30u64 {
        let data = dataset(f2, 0.01, 50.0, 75, seed);
        let (me, _) = maxima(f2, &data, 0.01, SolverConfig::euler(0.01), 0.8, 1.2, 500);
        let (mr, j) = maxima(f2, &data, 0.01, SolverConfig::rk54(0.00944), 0.8, 1.2, 500);
        println!("  seed {seed:3}: euler {me}  rk54 {mr}  (jump {j:.1})");
    }

    println!("figS1 seed sweep (a=0 / a=0.05 / a=0.1 maxima) on [0.8,1.2] with 101 pts:");
    let fs = ForcingSpec::Step { f1: -1.0, t_change: 2.5 };
    for seed in 1..=20u64 {
        let data = dataset(fs, 0.1, 5.0, 25, seed);
        let (m0, _) = maxima(fs, &data, 0.1, SolverConfig::rk54(1e-3), 0.8, 1.2, 101);
        let (m05, _) = maxima(
            ForcingSpec::TanhSmooth { f1: -1.0, t_change: 2.5, a: 0.05 },
            &data, 0.1, SolverConfig::rk54(1e-3), 0.8, 1.2, 101,
        );
        let (m10, _) = maxima(
            ForcingSpec::TanhSmooth { f1: -1.0, t_change: 2.5, a: 0.1 },
            &data, 0.1, SolverConfig::rk54(1e-3), 0.8, 1.2, 101,
        );
        println!("  seed {seed:3}: a=0 {m0:3}  a=0.05 {m05:3}  a=0.1 {m10:3}");
    }
}
