//! Dev probe: oscillator likelihood-surface shapes for the acceptance setups.

use odeinfer::experiment::{gaussian_point_eval, predict, SolverConfig};
use odeinfer::likelihood::{synth_gaussian_dataset, Dataset, ObservationOperator};
use odeinfer::models::oscillator::{oscillator_system, ForcingSpec, OscillatorParams};
use odeinfer::ode::ParamVector;
use odeinfer::surface::{jaggedness, param_grid, scan_likelihood, step_count_jump_correlation, JumpCorrelation};

fn truth() -> ParamVector<f64> {
    OscillatorParams::new(1.0, 0.2, 1.0).unwrap().theta()
}

fn dataset(forcing: ForcingSpec<f64>, sigma: f64, t_end: f64, n: usize, seed: u64) -> Dataset<f64> {
    let sys = oscillator_system(forcing);
    let times = param_grid(0.0, t_end, n).unwrap();
    let (clean, _) = predict(&sys, &truth(), &ObservationOperator::Component(0), &times, &SolverConfig::rk54(1e-8)).unwrap();
    synth_gaussian_dataset(&times, &clean, sigma, seed).unwrap()
}

fn scan(
    model_forcing: ForcingSpec<f64>,
    data: &Dataset<f64>,
    sigma: f64,
    solver: SolverConfig<f64>,
    lo: f64,
    hi: f64,
    n: usize,
    label: &str,
) {
    let sys = oscillator_system(model_forcing);
    let obs = ObservationOperator::Component(0);
    let grid = param_grid(lo, hi, n).unwrap();
    let eval = |theta: &ParamVector<f64>| gaussian_point_eval(&sys, theta, &obs, data, sigma, &solver);
    let s = scan_likelihood(&eval, &truth(), 2, &grid, &solver.tag()).unwrap();
    let rep = jaggedness(&s).unwrap();
    let corr = step_count_jump_correlation(&s, 10.0).unwrap();
    let peak_arg = s.grid[s.ll.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap().0];
    let corr_str = match corr {
        JumpCorrelation::NoJumps => "no jumps".to_string(),
        JumpCorrelation::Fraction(f) => format!("{f:.3}"),
    };
    println!(
        "{label:38} maxima={:3} max_jump={:9.3} tv_excess={:10.3} corr={} argmax={:.4}",
        rep.n_local_maxima, rep.max_abs_jump, rep.tv_excess, corr_str, peak_arg
    );
}

fn main() {
    // Fig. 2: 75 pts on [0,50], step to 0.9 at t=25, sigma=0.01.
    let f2 = ForcingSpec::Step { f1: 0.9, t_change: 25.0 };
    for seed in [101u64, 102, 103] {
        let data = dataset(f2, 0.01, 50.0, 75, seed);
        println!("--- fig2 data seed {seed}");
        scan(f2, &data, 0.01, SolverConfig::euler(0.01), 0.8, 1.2, 500, "fig2 euler dt=0.01");
        scan(f2, &data, 0.01, SolverConfig::rk54(0.00944), 0.8, 1.2, 500, "fig2 rk54 rtol=0.00944");
        scan(f2, &data, 0.01, SolverConfig::rk54(1e-8), 0.8, 1.2, 500, "fig2 rk54 rtol=1e-8 (ref)");
    }

    // Fig. 4 ladder: f1 in {1,-1,-5}, rtol 1e-3.
    println!("--- fig4 ladder");
    for f1 in [1.0, -1.0, -5.0] {
        let f = ForcingSpec::Step { f1, t_change: 25.0 };
        let data = dataset(f, 0.01, 50.0, 75, 201);
        scan(f, &data, 0.01, SolverConfig::rk54(1e-3), 0.8, 1.2, 200, &format!("fig4 f1={f1}"));
    }

    // Fig. 5: 50 pts on [0,10], t_change=5, f1=-5, narrow k window.
    println!("--- fig5 narrow window");
    let f5 = ForcingSpec::Step { f1: -5.0, t_change: 5.0 };
    let data5 = dataset(f5, 0.01, 10.0, 50, 301);
    for (lo, hi, n) in [(0.998, 1.002, 300), (0.99, 1.01, 300), (0.95, 1.05, 400)] {
        scan(f5, &data5, 0.01, SolverConfig::rk54(1e-3), lo, hi, n, &format!("fig5 k in [{lo},{hi}] n={n}"));
    }

    // Fig. S1: 25 pts on [0,5], f1=-1 step data; scans with step vs smoothed stimulus.
    println!("--- figS1 smoothing rescue");
    let fs = ForcingSpec::Step { f1: -1.0, t_change: 2.5 };
    let datas = dataset(fs, 0.1, 5.0, 25, 401);
    scan(fs, &datas, 0.1, SolverConfig::rk54(1e-3), 0.8, 1.2, 500, "figS1 a=0 (step)");
    for a in [0.05, 0.1] {
        let fsm = ForcingSpec::TanhSmooth { f1: -1.0, t_change: 2.5, a };
        scan(fsm, &datas, 0.1, SolverConfig::rk54(1e-3), 0.8, 1.2, 500, &format!("figS1 a={a}"));
    }
}
