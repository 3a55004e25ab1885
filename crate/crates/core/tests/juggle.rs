use juggler_core::angular::HalfInt;
use juggler_core::juggle::{estimate, run_shots, ShotClock, DEFAULT_BURN_IN};
use juggler_core::species::{DecaySpec, ManifoldSpec};
use juggler_core::sweep::{max_rate_at_fidelity, run_point, Optimum, Scenario, SweepResult};
use juggler_core::{fidelity, Schedule, ShotConfig, SpeciesDescription, SpeciesModel};

const TAU: f64 = 3.7e-9;

/// Two-manifold ion with no metastable levels.
fn bare_ion() -> SpeciesModel {
    let manifold = |label: &str| ManifoldSpec { label: label.into(), j: HalfInt::HALF };
    SpeciesModel::from_description(&SpeciesDescription {
        name: "X+".into(),
        manifolds: vec![manifold("S1/2"), manifold("P1/2")],
        decays: vec![DecaySpec {
            upper: "P1/2".into(),
            lower: "S1/2".into(),
            einstein_a: 1.0 / TAU,
            wavelength: 280e-9,
        }],
        repump_beams: vec![],
    })
    .unwrap()
}

fn ideal(window: f64) -> ShotConfig {
    let mut cfg = ShotConfig::new(window);
    cfg.latency = 0.0;
    cfg
}

#[test]
fn long_window_steady_state_is_three_fifths() {
    // x = 1 - 2x/3 for the population transferred by each pulse
    let est = estimate(&bare_ion(), &ideal(40.0 * TAU)).unwrap();
    assert!((est.p_r - 0.6).abs() < 1e-6, "{}", est.p_r);
    // only integrator error feeds the other sublevel
    assert!(est.p_w < 1e-8, "{}", est.p_w);
    assert!(est.fidelity > 1.0 - 1e-7);
}

#[test]
fn short_window_fidelity_tends_to_one_half() {
    let est = estimate(&bare_ion(), &ideal(TAU / 20.0)).unwrap();
    assert!((est.fidelity - 0.5).abs() < 0.02, "{}", est.fidelity);
}

#[test]
fn impurity_fidelity_near_expansion_estimate() {
    let mut cfg = ideal(40.0 * TAU);
    cfg.sigma_beta = 0.02f64.sqrt();
    let est = estimate(&bare_ion(), &cfg).unwrap();
    assert!((0.979..=0.991).contains(&est.fidelity), "{}", est.fidelity);
    // p_w ≈ (1 - p_r) × bad-excitation probability
    assert!((est.p_w / (1.0 - est.p_r) - 0.0123).abs() < 0.002);
}

#[test]
fn fidelity_from_conditional_wrong_excitation() {
    let f = fidelity(0.6, 0.4 * 0.0123).unwrap();
    assert!((f - 0.98386).abs() < 1e-5, "{f}");
}

#[test]
fn runs_settle_and_respect_burn_in() {
    let run = run_shots(&bare_ion(), &ideal(10e-9)).unwrap();
    assert!(run.converged());
    assert!(!run.quasi_periodic);
    assert!(run.records.len() >= DEFAULT_BURN_IN + run.cycle);
    assert!(run.max_trace_drift < 1e-8);
    for r in &run.records {
        assert!(r.rho_after.as_ref().unwrap().check().is_physical());
    }
}

#[test]
fn clocks_agree_without_repump_beams() {
    let a = estimate(&bare_ion(), &ideal(10e-9)).unwrap();
    let mut cfg = ideal(10e-9);
    cfg.clock = ShotClock::PerShot;
    let b = estimate(&bare_ion(), &cfg).unwrap();
    assert!((a.rate - b.rate).abs() <= 1e-9 * a.rate);
}

#[test]
fn preparation_pulses_scale_rate_by_detect_fraction() {
    let mut cfg = ideal(40.0 * TAU);
    cfg.schedule = Schedule::prepared(2);
    let est = estimate(&bare_ion(), &cfg).unwrap();
    // two same-handed pulses leave 4/9 of the wrong sublevel; steady state gives 15/19
    assert!((est.p_r - 15.0 / 19.0).abs() < 1e-6, "{}", est.p_r);
    let expect = 0.5 * (0.025 * est.p_gamma).powi(2) / (40.0 * TAU) / 3.0;
    assert!((est.rate - expect).abs() < 1e-9 * expect);
}

#[test]
fn latency_lowers_rate_not_fidelity() {
    let fast = estimate(&bare_ion(), &ideal(20e-9)).unwrap();
    let mut cfg = ideal(20e-9);
    cfg.latency = 100e-9;
    let slow = estimate(&bare_ion(), &cfg).unwrap();
    assert!(slow.rate < fast.rate);
    assert!(slow.fidelity >= fast.fidelity - 1e-9);
}

#[test]
fn sweep_rows_follow_grid_and_optimum_is_feasible() {
    let model = bare_ion();
    let mut sc = Scenario::ideal();
    sc.window_grid = vec![2e-9, 5e-9, 10e-9, 20e-9, 40e-9];
    let rows: Vec<_> = sc.window_grid.iter().map(|&w| run_point(&model, &sc, w)).collect();
    assert!(rows.iter().all(|r| r.converged() && r.rate >= 0.0 && (0.0..=1.0).contains(&r.fidelity)));
    let res = SweepResult { species: "X+".into(), scenario: "ideal".into(), rows };
    match max_rate_at_fidelity(&res, 0.97) {
        Optimum::Feasible { fidelity, .. } => assert!(fidelity >= 0.97),
        Optimum::NoFeasible => panic!("expected a feasible window"),
    }
    assert_eq!(max_rate_at_fidelity(&res, 1.5), Optimum::NoFeasible);
}
