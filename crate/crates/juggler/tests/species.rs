use juggler::run::{run_sweep, run_sweeps};
use juggler::output::to_csv;
use juggler::species_file::{builtin_species, parse_species, resolve_species, BUILTIN};
use juggler_core::juggle::{estimate, run_shots};
use juggler_core::sweep::Scenario;
use juggler_core::ShotConfig;

#[test]
fn builtins_resolve_by_key_and_name() {
    let models = builtin_species().unwrap();
    assert_eq!(models.len(), BUILTIN.len());
    assert_eq!(resolve_species("Sr+").unwrap().name(), "Sr+");
    assert_eq!(resolve_species("yb").unwrap().name(), "Yb+");
    assert!(resolve_species("xx").is_err());
}

#[test]
fn species_files_reject_bad_input() {
    assert!(parse_species("{").is_err());
    let (_, mg) = BUILTIN[0];
    let broken = mg.replacen("\"S1/2\"", "\"Q\"", 1);
    assert!(parse_species(&broken).is_err());
}

#[test]
fn every_species_stays_physical_over_many_shots() {
    for model in builtin_species().unwrap() {
        let mut cfg = ShotConfig::new(20e-9);
        cfg.sigma_beta = 0.02f64.sqrt();
        cfg.burn_in_shots = 20;
        cfg.max_shots = 40;
        cfg.tolerances.monitor_positivity = true;
        let run = run_shots(&model, &cfg).unwrap();
        assert!(run.max_trace_drift < 1e-8, "{}", model.name());
        for r in &run.records {
            let rho = r.rho_after.as_ref().unwrap();
            assert!(rho.check().is_physical(), "{} shot {}", model.name(), r.shot_index);
            assert!(r.p_r >= 0.0 && r.p_w >= 0.0 && r.p_r + r.p_w <= 1.0 + 1e-9);
        }
    }
}

#[test]
fn long_window_mg_recovers_three_fifths() {
    let mg = resolve_species("mg").unwrap();
    let mut cfg = ShotConfig::new(100e-9);
    cfg.latency = 0.0;
    let est = estimate(&mg, &cfg).unwrap();
    assert!((est.p_r - 0.6).abs() < 1e-3, "{}", est.p_r);
}

#[test]
fn incommensurate_beats_settle_in_blocks() {
    // the repump beat period does not divide this shot period
    let sr = resolve_species("sr").unwrap();
    let cfg = Scenario::realistic().shot_config(1.1e-9);
    let run = run_shots(&sr, &cfg).unwrap();
    assert!(run.quasi_periodic);
    assert!(run.converged());
    let est = estimate(&sr, &cfg).unwrap();
    assert!((0.979..=0.991).contains(&est.fidelity));
}

#[test]
fn output_is_identical_for_any_worker_count() {
    let models = vec![resolve_species("mg").unwrap(), resolve_species("ca").unwrap()];
    let mut sc = Scenario::realistic();
    sc.window_grid = vec![3e-9, 9e-9, 20e-9, 45e-9];
    let one = to_csv(&run_sweeps(&models, std::slice::from_ref(&sc), 1).unwrap()).unwrap();
    let three = to_csv(&run_sweeps(&models, std::slice::from_ref(&sc), 3).unwrap()).unwrap();
    assert_eq!(one, three);
    let single = run_sweep(&models[1], &sc, 2).unwrap();
    assert_eq!(single.species, "Ca+");
    assert_eq!(single.rows.len(), 4);
}
