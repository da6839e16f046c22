//! Cross-module invariants: solver accuracy against closed-form oracles,
//! tolerance monotonicity, per-step error control, and the log-likelihood
//! error bound exercised end to end.

mod common;

use common::{oscillator_dataset, theta_with, true_params, underdamped_constant_forcing};
use odeinfer::experiment::{gaussian_point_eval, predict, SolverConfig};
use odeinfer::likelihood::{
    ll_error_bound, log_likelihood_gaussian, GaussianIidNoise, ObservationOperator,
};
use odeinfer::models::oscillator::{oscillator_system, ForcingSpec};
use odeinfer::ode::{sample_trajectory, OdeSystem, ParamVector};
use odeinfer::rk::{error_norm, solve_adaptive, RkMethod, RkPair, Tolerances};
use odeinfer::surface::param_grid;

#[test]
fn rk54_matches_underdamped_closed_form() {
    let p = true_params();
    let system = oscillator_system(ForcingSpec::Constant(1.0));
    let times = param_grid(0.0, 50.0, 75).unwrap();
    let (rows, _) = predict(
        &system,
        &p.theta(),
        &ObservationOperator::Identity,
        &times,
        &SolverConfig::rk54(1e-10),
    )
    .unwrap();
    let mut worst = 0.0f64;
    for (t, row) in times.iter().zip(&rows) {
        let (x, v) = underdamped_constant_forcing(&p, 1.0, *t);
        worst = worst.max((row[0] - x).abs()).max((row[1] - v).abs());
    }
    assert!(worst < 1e-7, "max deviation {worst}");
}

#[test]
fn adaptive_error_is_monotone_in_rtol() {
    // Step-forcing problem: the max error over the data times against an
    // rtol=1e-12 reference must not increase as rtol tightens.
    let system = oscillator_system(ForcingSpec::Step { f1: -1.0, t_change: 2.5 });
    let theta = true_params().theta();
    let times = param_grid(0.0, 5.0, 25).unwrap();
    let obs = ObservationOperator::Component(0);
    let (reference, _) = predict(&system, &theta, &obs, &times, &SolverConfig::rk54(1e-12)).unwrap();
    let mut errors = Vec::new();
    for rtol in [1e-2, 1e-4, 1e-6, 1e-8] {
        let (rows, _) = predict(&system, &theta, &obs, &times, &SolverConfig::rk54(rtol)).unwrap();
        let err = rows
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a[0] - b[0]).abs())
            .fold(0.0f64, f64::max);
        errors.push(err);
    }
    for w in errors.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-12), "not monotone: {errors:?}");
    }
    assert!(errors[0] > errors[3], "ladder should actually improve: {errors:?}");
}

/// Re-integrates each accepted step at rtol/100 and checks that the endpoint
/// moves by less than 10 in the solver's own scaled error norm, i.e. less
/// than 10·(atol + rtol·|x|) measured the way acceptance was judged. (A
/// per-component reading of that bound is unattainable for an RMS-controlled
/// pair whenever one component crosses zero while another is order one.)
/// `skip` filters out steps on which the embedded estimate is not valid.
fn check_step_reintegration(
    forcing: ForcingSpec<f64>,
    rtol: f64,
    skip: impl Fn(f64, f64) -> bool,
) -> usize {
    let system = oscillator_system(forcing);
    let theta = true_params().theta();
    let atol = 1e-9;
    let tol = Tolerances::new(atol, rtol).unwrap();
    let pair = RkPair::new(RkMethod::Rk54);
    let traj = solve_adaptive(&system, &theta, &pair, &tol, 5.0, 100_000).unwrap();

    let tight = Tolerances::new(atol, rtol / 100.0).unwrap();
    let mut checked = 0;
    for k in 0..traj.times().len() - 1 {
        let t_left = traj.times()[k];
        let t_right = traj.times()[k + 1];
        if skip(t_left, t_right) {
            continue;
        }
        let start = traj.states()[k].clone();
        let step_system = OdeSystem::new(
            2,
            t_left,
            start,
            Box::new(move |t, x, th: &ParamVector<f64>, out: &mut [f64]| {
                out[0] = x[1];
                out[1] = (forcing.value(t) - th[1] * x[1] - th[2] * x[0]) / th[0];
            }),
        )
        .unwrap();
        let refined = solve_adaptive(&step_system, &theta, &pair, &tight, t_right, 100_000).unwrap();
        let end_refined = refined.states().last().unwrap();
        let deviation = error_norm(&traj.states()[k + 1], end_refined, &traj.states()[k], &tol);
        assert!(
            deviation < 10.0,
            "step {k} ([{t_left}, {t_right}]): scaled deviation {deviation}"
        );
        checked += 1;
    }
    checked
}

#[test]
fn accepted_steps_survive_reintegration_at_tighter_tolerance() {
    // Smooth problems: every accepted step obeys the bound.
    assert!(check_step_reintegration(ForcingSpec::Constant(1.0), 1e-3, |_, _| false) > 10);
    let smooth = ForcingSpec::TanhSmooth { f1: -1.0, t_change: 2.5, a: 0.1 };
    assert!(check_step_reintegration(smooth, 1e-3, |_, _| false) > 10);

    // Discontinuous forcing: the bound holds on every step except the one
    // straddling the jump, where the embedded estimate cannot see the
    // discontinuity. That blind spot is the likelihood-corruption mechanism
    // studied by the surface diagnostics.
    let checked = check_step_reintegration(
        ForcingSpec::Step { f1: -1.0, t_change: 2.5 },
        1e-3,
        |lo, hi| lo <= 2.5 && 2.5 <= hi,
    );
    assert!(checked > 10);
}

#[test]
fn euler_converges_linearly_on_the_oscillator() {
    let p = true_params();
    let system = oscillator_system(ForcingSpec::Constant(1.0));
    let times = param_grid(0.0, 5.0, 25).unwrap();
    let obs = ObservationOperator::Component(0);
    let mut errors = Vec::new();
    for dt in [0.02, 0.01, 0.005] {
        let (rows, _) = predict(&system, &p.theta(), &obs, &times, &SolverConfig::euler(dt)).unwrap();
        let err = times
            .iter()
            .zip(&rows)
            .map(|(t, row)| (row[0] - underdamped_constant_forcing(&p, 1.0, *t).0).abs())
            .fold(0.0f64, f64::max);
        errors.push(err);
    }
    let r1 = errors[0] / errors[1];
    let r2 = errors[1] / errors[2];
    assert!((1.8..=2.2).contains(&r1), "{errors:?}");
    assert!((1.8..=2.2).contains(&r2), "{errors:?}");
}

#[test]
fn ll_error_bound_holds_for_random_parameter_values() {
    // Identity observation, K = 1: the bound must dominate the actual
    // log-likelihood discrepancy at every parameter value tried.
    let system = oscillator_system(ForcingSpec::Constant(1.0));
    let data = oscillator_dataset(ForcingSpec::Constant(1.0), 0.1, 5.0, 25, 2024, true);
    let noise = GaussianIidNoise::new(0.1).unwrap();
    let obs = ObservationOperator::Identity;
    let reference = SolverConfig::rk54(1e-12);

    // Low-discrepancy sweep of k values across the scan range.
    for i in 0..25 {
        let k = 0.7 + 0.6 * ((i as f64 * 0.618_033_988_749) % 1.0);
        let theta = theta_with(2, k);
        let (ref_rows, _) = predict(&system, &theta, &obs, data.times(), &reference).unwrap();
        for dt in [0.1, 0.01] {
            let (euler_rows, _) =
                predict(&system, &theta, &obs, data.times(), &SolverConfig::euler(dt)).unwrap();
            let ll_ref = log_likelihood_gaussian(&data, &ref_rows, &noise).unwrap();
            let ll_euler = log_likelihood_gaussian(&data, &euler_rows, &noise).unwrap();

            let mut e = Vec::new();
            let mut resid = Vec::new();
            for ((r_row, e_row), y) in ref_rows.iter().zip(&euler_rows).zip(data.observations()) {
                let err: f64 = r_row
                    .iter()
                    .zip(e_row)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                let res: f64 =
                    r_row.iter().zip(y).map(|(g, yv)| (yv - g) * (yv - g)).sum::<f64>().sqrt();
                e.push(err);
                resid.push(res);
            }
            let bound = ll_error_bound(&e, &resid, 1.0, 0.1).unwrap();
            assert!(
                (ll_ref - ll_euler).abs() <= bound,
                "k={k}, dt={dt}: |ΔLL|={} > bound={bound}",
                (ll_ref - ll_euler).abs()
            );
        }
    }
}

#[test]
fn dense_output_exact_for_linear_solutions() {
    let sys = OdeSystem::new(
        1,
        0.0,
        vec![0.0],
        Box::new(|_t, _x, _p: &ParamVector<f64>, out: &mut [f64]| out[0] = 2.0),
    )
    .unwrap();
    let theta = ParamVector::new(vec![]).unwrap();
    let traj = SolverConfig::rk54(1e-6).solve(&sys, &theta, 3.0).unwrap();
    let queries = [0.1, 0.77, 1.234, 2.9];
    for (q, s) in queries.iter().zip(sample_trajectory(&traj, &queries).unwrap()) {
        assert!((s[0] - 2.0 * q).abs() < 1e-12);
    }
}

#[test]
fn likelihood_surface_flat_when_parameter_is_inert() {
    // Scanning m in a zero-RHS system: the likelihood cannot depend on it.
    let data = oscillator_dataset(ForcingSpec::Constant(1.0), 0.1, 5.0, 25, 5, false);
    let zero_sys = OdeSystem::new(
        2,
        0.0,
        vec![0.0, 0.0],
        Box::new(|_t, _x, _p: &ParamVector<f64>, out: &mut [f64]| {
            out[0] = 0.0;
            out[1] = 0.0;
        }),
    )
    .unwrap();
    let obs = ObservationOperator::Component(0);
    let solver = SolverConfig::rk54(1e-6);
    let grid = param_grid(0.5, 1.5, 11).unwrap();
    let base = theta_with(0, 1.0);
    let eval = |theta: &ParamVector<f64>| gaussian_point_eval(&zero_sys, theta, &obs, &data, 0.1, &solver);
    let surface = odeinfer::surface::scan_likelihood(&eval, &base, 0, &grid, "flat").unwrap();
    let first = surface.ll[0];
    assert!(surface.ll.iter().all(|&v| (v - first).abs() < 1e-12));
}
