use juggler_core::dynamics::PhasedTerm;
use juggler_core::linalg::CMatrix;
use juggler_core::{
    lindblad_rhs, CollapseOperator, DensityOperator, Lindbladian, PhasedHamiltonian, Tolerances,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn decay(gamma: f64) -> Lindbladian {
    Lindbladian::new(PhasedHamiltonian::new(2), vec![CollapseOperator::transition(0, 1, gamma.sqrt())])
        .unwrap()
}

#[test]
fn two_level_decay_is_exponential() {
    let gamma = 1.0 / 7.0e-9;
    let l = decay(gamma);
    let rho0 = DensityOperator::basis_state(2, 1);
    for gt in [0.01, 0.3, 1.0, 3.0, 8.0] {
        let r = l.evolve(&rho0, 0.0, gt / gamma, &Tolerances::default()).unwrap();
        let pe = r.final_state.population(1);
        assert!((pe - (-gt as f64).exp()).abs() < 1e-6, "γt={gt}: {pe}");
        assert!((r.fluxes.total() - (1.0 - pe)).abs() < 1e-6);
    }
}

#[test]
fn coherence_decays_at_half_rate() {
    let gamma = 2.0e7;
    let l = decay(gamma);
    let plus = DensityOperator::from_matrix(CMatrix::from_element(2, 2, c(0.5, 0.0))).unwrap();
    let t = 50e-9;
    let r = l.evolve(&plus, 0.0, t, &Tolerances::default()).unwrap();
    let coh = r.final_state.matrix()[(0, 1)].re;
    assert!((coh - 0.5 * (-gamma * t / 2.0).exp()).abs() < 1e-7);
}

#[test]
fn resonant_rabi_oscillation() {
    let omega = 2.0 * std::f64::consts::PI * 25e6;
    let mut h = PhasedHamiltonian::new(2);
    h.push(PhasedTerm { row: 1, col: 0, coupling: c(omega / 2.0, 0.0), detuning: 0.0 });
    let l = Lindbladian::new(h, vec![]).unwrap();
    let rho0 = DensityOperator::basis_state(2, 0);
    for t in [3e-9, 10e-9, 20e-9, 47e-9] {
        let r = l.evolve(&rho0, 0.0, t, &Tolerances::default()).unwrap();
        let want = (omega * t / 2.0).sin().powi(2);
        assert!((r.final_state.population(1) - want).abs() < 1e-6);
    }
}

#[test]
fn phase_of_start_time_enters_through_detuning_only() {
    // A term with zero detuning is time independent, so t_start is irrelevant.
    let mut h = PhasedHamiltonian::new(2);
    h.push(PhasedTerm { row: 1, col: 0, coupling: c(1e7, 0.0), detuning: 0.0 });
    let l = Lindbladian::new(h, vec![CollapseOperator::transition(0, 1, 3e3)]).unwrap();
    let rho0 = DensityOperator::basis_state(2, 0);
    let a = l.evolve(&rho0, 0.0, 100e-9, &Tolerances::default()).unwrap();
    let b = l.evolve(&rho0, 1.234e-6, 100e-9, &Tolerances::default()).unwrap();
    assert!((a.final_state.matrix() - b.final_state.matrix()).norm() < 1e-12);
}

/// Λ system: |0⟩, |1⟩ ground, |2⟩ excited, two drives and two decays.
fn lambda_system(d1: f64, d2: f64) -> Lindbladian {
    let mut h = PhasedHamiltonian::new(3);
    h.push(PhasedTerm { row: 2, col: 0, coupling: c(3e7, 0.0), detuning: d1 });
    h.push(PhasedTerm { row: 2, col: 1, coupling: c(0.0, 2e7), detuning: d2 });
    Lindbladian::new(
        h,
        vec![CollapseOperator::transition(0, 2, 6e7f64.sqrt()), CollapseOperator::transition(1, 2, 4e7f64.sqrt())],
    )
    .unwrap()
}

#[test]
fn sparse_generator_matches_dense_reference() {
    let l = lambda_system(2.0 * std::f64::consts::PI * 10e6, -2.0 * std::f64::consts::PI * 20e6);
    let mut m = CMatrix::zeros(3, 3);
    m[(0, 0)] = c(0.5, 0.0);
    m[(1, 1)] = c(0.3, 0.0);
    m[(2, 2)] = c(0.2, 0.0);
    m[(0, 2)] = c(0.1, 0.05);
    m[(2, 0)] = c(0.1, -0.05);
    m[(0, 1)] = c(-0.02, 0.1);
    m[(1, 0)] = c(-0.02, -0.1);
    let jumps: Vec<CMatrix> = l.jumps().iter().map(|j| j.to_dense(3)).collect();
    for t in [0.0, 13e-9, 71e-9] {
        let want = lindblad_rhs(&m, &l.hamiltonian().at(t), &jumps).unwrap();
        let got = l.rhs(t, &m);
        assert!((&got - &want).norm() <= 1e-12 * want.norm(), "t={t}");
    }
}

#[test]
fn driven_lambda_stays_physical() {
    let l = lambda_system(2.0 * std::f64::consts::PI * 10e6, -2.0 * std::f64::consts::PI * 10e6);
    let rho0 = DensityOperator::mixture_of(3, &[0, 1]);
    let tol = Tolerances { monitor_positivity: true, ..Tolerances::default() };
    let r = l.evolve(&rho0, 0.0, 400e-9, &tol).unwrap();
    assert!(r.max_trace_drift < 1e-8);
    assert!(r.max_hermiticity_error < 1e-10);
    assert!(r.min_eigenvalue.unwrap() > -1e-8);
    assert!(r.final_state.check().is_physical());
    assert!(r.fluxes.values().iter().all(|&f| f >= 0.0));
}

#[test]
fn undriven_flux_equals_population_lost() {
    let l = Lindbladian::new(
        PhasedHamiltonian::new(4),
        vec![
            CollapseOperator::transition(0, 3, 5e7f64.sqrt()),
            CollapseOperator::transition(1, 3, 2e7f64.sqrt()),
            CollapseOperator::transition(2, 3, 1e7f64.sqrt()),
        ],
    )
    .unwrap();
    let rho0 = DensityOperator::basis_state(4, 3);
    let r = l.evolve(&rho0, 0.0, 30e-9, &Tolerances::default()).unwrap();
    let lost = 1.0 - r.final_state.population(3);
    assert!((r.fluxes.total() - lost).abs() < 1e-6);
    // branching follows the rates
    let v = r.fluxes.values();
    assert!((v[0] / v[1] - 2.5).abs() < 1e-6);
    assert!((v[1] / v[2] - 2.0).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_lambda_is_trace_preserving_and_positive(
        d1 in -60.0f64..60.0,
        d2 in -60.0f64..60.0,
        t in 10e-9f64..300e-9,
        p0 in 0.0f64..1.0,
    ) {
        let two_pi = 2.0 * std::f64::consts::PI;
        let l = lambda_system(two_pi * d1 * 1e6, two_pi * d2 * 1e6);
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = c(p0, 0.0);
        m[(1, 1)] = c(1.0 - p0, 0.0);
        let rho0 = DensityOperator::from_matrix(m).unwrap();
        let tol = Tolerances { monitor_positivity: true, ..Tolerances::default() };
        let r = l.evolve(&rho0, 0.0, t, &tol).unwrap();
        prop_assert!(r.max_trace_drift < 1e-8);
        prop_assert!(r.min_eigenvalue.unwrap() > -1e-8);
        prop_assert!(r.max_hermiticity_error < 1e-10);
    }
}
