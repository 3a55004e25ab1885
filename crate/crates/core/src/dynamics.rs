//! Lindblad master-equation evolution with per-channel photon-flux bookkeeping.
//!
//! The generator is
//!
//! ```text
//! dρ/dt = -i[ρ, H] + ½ Σ_C (2 C ρ C† - ρ C†C - C†C ρ)
//! ```
//!
//! with `H` in angular-frequency units. Alongside `ρ` the integrator carries one
//! quadrature state per collapse channel, `q_c = ∫ Tr[C_c† C_c ρ] dt`, which is
//! the probability that channel `c` fired during the interval.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrator::{self, OdeSystem, StepControl};
use crate::linalg::{self, CMatrix, I, ONE, ZERO};

/// Electronic density operator over a species' level basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

/// Tolerances a [`DensityOperator`] must satisfy to be considered physical.
pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = -1e-8;

/// Result of [`DensityOperator::check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn is_physical(&self) -> bool {
        self.hermiticity_error <= HERMITICITY_TOL
            && self.trace_error <= TRACE_TOL
            && self.min_eigenvalue >= POSITIVITY_TOL
    }
}

impl DensityOperator {
    /// Wrap a matrix without validation; see [`DensityOperator::check`].
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        Ok(DensityOperator { matrix })
    }

    /// Pure basis state `|k⟩⟨k|`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        DensityOperator { matrix: linalg::ket_bra(dim, k, k) }
    }

    /// Equal incoherent mixture of the given basis levels.
    pub fn mixture_of(dim: usize, levels: &[usize]) -> Self {
        let mut matrix = CMatrix::zeros(dim, dim);
        let w = 1.0 / levels.len() as f64;
        for &k in levels {
            matrix[(k, k)] += Complex64::new(w, 0.0);
        }
        DensityOperator { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let levels: Vec<usize> = (0..dim).collect();
        Self::mixture_of(dim, &levels)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn population(&self, k: usize) -> f64 {
        self.matrix[(k, k)].re
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.matrix)[0]
    }

    pub fn check(&self) -> StateDiagnostics {
        StateDiagnostics {
            hermiticity_error: linalg::hermiticity_error(&self.matrix),
            trace_error: (linalg::trace(&self.matrix) - ONE).norm(),
            min_eigenvalue: self.min_eigenvalue(),
        }
    }
}

/// Trace distance `½‖ρa − ρb‖₁`.
pub fn steady_state_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let diff = &a.matrix - &b.matrix;
    Ok(0.5 * linalg::hermitian_eigenvalues(&diff).iter().map(|x| x.abs()).sum::<f64>())
}

/// Sparse jump operator `C = Σ c_k |row_k⟩⟨col_k|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseOperator {
    entries: Vec<(usize, usize, Complex64)>,
}

impl CollapseOperator {
    pub fn new(entries: Vec<(usize, usize, Complex64)>) -> Self {
        CollapseOperator { entries }
    }

    /// `amplitude · |to⟩⟨from|`.
    pub fn transition(to: usize, from: usize, amplitude: f64) -> Self {
        CollapseOperator { entries: vec![(to, from, Complex64::new(amplitude, 0.0))] }
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn to_dense(&self, dim: usize) -> CMatrix {
        let mut m = CMatrix::zeros(dim, dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// Nonzero entries of `C†C`.
    fn gram(&self) -> Vec<(usize, usize, Complex64)> {
        let mut out: Vec<(usize, usize, Complex64)> = Vec::new();
        for &(r1, c1, v1) in &self.entries {
            for &(r2, c2, v2) in &self.entries {
                if r1 != r2 {
                    continue;
                }
                let val = v1.conj() * v2;
                match out.iter_mut().find(|(a, b, _)| *a == c1 && *b == c2) {
                    Some(e) => e.2 += val,
                    None => out.push((c1, c2, val)),
                }
            }
        }
        out.retain(|e| e.2 != ZERO);
        out
    }
}

/// One Hermitian pair `c e^{iΔt} |row⟩⟨col| + h.c.`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasedTerm {
    pub row: usize,
    pub col: usize,
    pub coupling: Complex64,
    /// Angular frequency of the phase factor, rad/s.
    pub detuning: f64,
}

/// Time-dependent Hermitian generator built from [`PhasedTerm`]s, in rad/s.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhasedHamiltonian {
    dim: usize,
    terms: Vec<PhasedTerm>,
}

impl PhasedHamiltonian {
    pub fn new(dim: usize) -> Self {
        PhasedHamiltonian { dim, terms: Vec::new() }
    }

    pub fn push(&mut self, term: PhasedTerm) {
        debug_assert!(term.row < self.dim && term.col < self.dim);
        self.terms.push(term);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[PhasedTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn at(&self, t: f64) -> CMatrix {
        let mut h = CMatrix::zeros(self.dim, self.dim);
        for term in &self.terms {
            let c = term.coupling * Complex64::from_polar(1.0, term.detuning * t);
            h[(term.row, term.col)] += c;
            h[(term.col, term.row)] += c.conj();
        }
        h
    }

    /// Highest frequency (Hz) present in either a matrix element or a
    /// population beat between two terms.
    pub fn highest_frequency(&self) -> f64 {
        let mut top = 0.0f64;
        for (i, a) in self.terms.iter().enumerate() {
            top = top.max(a.detuning.abs());
            for b in &self.terms[i + 1..] {
                top = top.max((a.detuning - b.detuning).abs());
            }
        }
        top / (2.0 * core::f64::consts::PI)
    }
}

/// Dense reference evaluation of the Lindblad generator.
pub fn lindblad_rhs(rho: &CMatrix, h: &CMatrix, collapses: &[CMatrix]) -> Result<CMatrix> {
    let d = rho.nrows();
    for m in core::iter::once(h).chain(collapses) {
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: m.nrows() });
        }
    }
    let mut out = (rho * h - h * rho) * (-I);
    for c in collapses {
        let cd = c.adjoint();
        let cdc = &cd * c;
        out += c * rho * &cd * Complex64::new(1.0, 0.0)
            - (rho * &cdc + &cdc * rho) * Complex64::new(0.5, 0.0);
    }
    Ok(out)
}

/// Integrator settings for [`Lindbladian::evolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Explicit step cap in seconds. When `None`, the cap is one tenth of the
    /// period of the highest frequency in the Hamiltonian.
    pub max_step: Option<f64>,
    pub max_steps: usize,
    /// Compute the minimum eigenvalue of ρ at every accepted step.
    pub monitor_positivity: bool,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-8,
            atol: 1e-10,
            max_step: None,
            max_steps: 5_000_000,
            monitor_positivity: false,
        }
    }
}

/// Accumulated firing probability of each collapse channel, in channel order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FluxAccumulator {
    values: Vec<f64>,
}

impl FluxAccumulator {
    pub fn zeros(n: usize) -> Self {
        FluxAccumulator { values: vec![0.0; n] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Sum over the channels selected by `keep`.
    pub fn sum_where(&self, mut keep: impl FnMut(usize) -> bool) -> f64 {
        self.values.iter().enumerate().filter(|(i, _)| keep(*i)).map(|(_, v)| v).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    pub final_state: DensityOperator,
    pub fluxes: FluxAccumulator,
    pub steps_taken: usize,
    pub max_trace_drift: f64,
    /// Smallest eigenvalue seen, when positivity monitoring is enabled.
    pub min_eigenvalue: Option<f64>,
    pub max_hermiticity_error: f64,
}

/// Precomputed Lindblad generator: sparse Hamiltonian plus sparse jumps.
#[derive(Debug, Clone)]
pub struct Lindbladian {
    dim: usize,
    hamiltonian: PhasedHamiltonian,
    jumps: Vec<CollapseOperator>,
    grams: Vec<Vec<(usize, usize, Complex64)>>,
    /// `½ Σ C†C` when it is diagonal.
    damping_diag: Option<Vec<f64>>,
    damping: Vec<(usize, usize, Complex64)>,
}

impl Lindbladian {
    pub fn new(hamiltonian: PhasedHamiltonian, jumps: Vec<CollapseOperator>) -> Result<Self> {
        let dim = hamiltonian.dim();
        for j in &jumps {
            for &(r, c, _) in j.entries() {
                if r >= dim || c >= dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: r.max(c) + 1 });
                }
            }
        }
        let grams: Vec<_> = jumps.iter().map(CollapseOperator::gram).collect();
        let mut damping: Vec<(usize, usize, Complex64)> = Vec::new();
        for g in &grams {
            for &(r, c, v) in g {
                match damping.iter_mut().find(|(a, b, _)| *a == r && *b == c) {
                    Some(e) => e.2 += v * 0.5,
                    None => damping.push((r, c, v * 0.5)),
                }
            }
        }
        let damping_diag = damping.iter().all(|(r, c, _)| r == c).then(|| {
            let mut diag = vec![0.0; dim];
            for &(r, _, v) in &damping {
                diag[r] += v.re;
            }
            diag
        });
        Ok(Lindbladian { dim, hamiltonian, jumps, grams, damping_diag, damping })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn channels(&self) -> usize {
        self.jumps.len()
    }

    pub fn hamiltonian(&self) -> &PhasedHamiltonian {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[CollapseOperator] {
        &self.jumps
    }

    /// Evaluate `dρ/dt` at time `t` (slice form, column-major).
    fn apply(&self, t: f64, rho: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim;
        match &self.damping_diag {
            Some(k) => {
                for c in 0..d {
                    for r in 0..d {
                        out[c * d + r] = -rho[c * d + r] * (k[r] + k[c]);
                    }
                }
            }
            None => {
                out.fill(ZERO);
                for &(i, j, v) in &self.damping {
                    for c in 0..d {
                        out[c * d + i] -= v * rho[c * d + j];
                    }
                    for r in 0..d {
                        out[j * d + r] -= rho[i * d + r] * v;
                    }
                }
            }
        }

        for jump in &self.jumps {
            let e = jump.entries();
            for &(i1, j1, x) in e {
                for &(i2, j2, y) in e {
                    out[i2 * d + i1] += x * rho[j2 * d + j1] * y.conj();
                }
            }
        }

        // -i[ρ, H] = i(Hρ - ρH)
        for term in self.hamiltonian.terms() {
            let c = term.coupling * Complex64::from_polar(1.0, term.detuning * t);
            let (a, b) = (term.row, term.col);
            let ic = I * c;
            let icb = I * c.conj();
            for col in 0..d {
                let rb = rho[col * d + b];
                let ra = rho[col * d + a];
                out[col * d + a] += ic * rb;
                out[col * d + b] += icb * ra;
            }
            for row in 0..d {
                let ra = rho[a * d + row];
                let rb = rho[b * d + row];
                out[b * d + row] -= ra * ic;
                out[a * d + row] -= rb * icb;
            }
        }
    }

    /// Dense `dρ/dt` at time `t`, mainly for diagnostics and tests.
    pub fn rhs(&self, t: f64, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        self.apply(t, rho.as_slice(), out.as_mut_slice());
        out
    }

    fn default_max_step(&self, duration: f64) -> f64 {
        let f = self.hamiltonian.highest_frequency();
        if f > 0.0 {
            (0.1 / f).min(duration)
        } else {
            duration
        }
    }

    /// Integrate from `t_start` for `duration` seconds.
    ///
    /// `t_start` only sets the phase of the Hamiltonian's oscillating terms.
    pub fn evolve(
        &self,
        rho0: &DensityOperator,
        t_start: f64,
        duration: f64,
        tol: &Tolerances,
    ) -> Result<EvolutionResult> {
        if rho0.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rho0.dim() });
        }
        if !(duration >= 0.0) {
            return Err(Error::NegativeDuration(duration));
        }
        let d2 = self.dim * self.dim;
        let nq = self.jumps.len();
        let mut y = Vec::with_capacity(d2 + nq);
        y.extend_from_slice(rho0.matrix.as_slice());
        y.resize(d2 + nq, ZERO);

        let trace0 = rho0.trace();
        let mut drift = 0.0f64;
        let mut herm = linalg::hermiticity_error(&rho0.matrix);
        let mut min_eig = tol.monitor_positivity.then(|| rho0.min_eigenvalue());
        let ctl = StepControl {
            rtol: tol.rtol,
            atol: tol.atol,
            max_step: tol.max_step.unwrap_or_else(|| self.default_max_step(duration)),
            max_steps: tol.max_steps,
        };
        let system = System { inner: self };
        let stats = integrator::integrate(&system, t_start, t_start + duration, &mut y, &ctl, |_, y| {
            let tr: f64 = (0..self.dim).map(|k| y[k * self.dim + k].re).sum();
            drift = drift.max((tr - trace0).abs());
            if let Some(m) = min_eig.as_mut() {
                let rho = CMatrix::from_column_slice(self.dim, self.dim, &y[..d2]);
                herm = herm.max(linalg::hermiticity_error(&rho));
                *m = m.min(linalg::hermitian_eigenvalues(&rho)[0]);
            }
        })?;

        let matrix = CMatrix::from_column_slice(self.dim, self.dim, &y[..d2]);
        let fluxes = y[d2..].iter().map(|q| q.re).collect();
        Ok(EvolutionResult {
            final_state: DensityOperator { matrix },
            fluxes: FluxAccumulator { values: fluxes },
            steps_taken: stats.accepted,
            max_trace_drift: drift,
            min_eigenvalue: min_eig,
            max_hermiticity_error: herm,
        })
    }
}

struct System<'a> {
    inner: &'a Lindbladian,
}

impl OdeSystem for System<'_> {
    fn dim(&self) -> usize {
        let d = self.inner.dim;
        d * d + self.inner.jumps.len()
    }

    fn rhs(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]) {
        let d = self.inner.dim;
        let rho = &y[..d * d];
        let (drho, dq) = dy.split_at_mut(d * d);
        self.inner.apply(t, rho, drho);
        for (slot, gram) in dq.iter_mut().zip(&self.inner.grams) {
            let mut rate = 0.0;
            for &(j, j2, v) in gram {
                rate += (v * rho[j * d + j2]).re;
            }
            *slot = Complex64::new(rate, 0.0);
        }
    }

    fn accepted(&self, _t: f64, y: &mut [Complex64]) {
        let d = self.inner.dim;
        let (rho, q) = y.split_at_mut(d * d);
        for c in 0..d {
            rho[c * d + c].im = 0.0;
            for r in 0..c {
                let avg = (rho[c * d + r] + rho[r * d + c].conj()) * 0.5;
                rho[c * d + r] = avg;
                rho[r * d + c] = avg.conj();
            }
        }
        for v in q {
            v.im = 0.0;
        }
    }
}

/// Convenience wrapper: build the generator and evolve once.
pub fn evolve(
    rho0: &DensityOperator,
    duration: f64,
    hamiltonian: &PhasedHamiltonian,
    collapses: &[CollapseOperator],
    tol: &Tolerances,
) -> Result<EvolutionResult> {
    let l = Lindbladian::new(hamiltonian.clone(), collapses.to_vec())?;
    l.evolve(rho0, 0.0, duration, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_level_decay(gamma: f64) -> Lindbladian {
        Lindbladian::new(
            PhasedHamiltonian::new(2),
            vec![CollapseOperator::transition(0, 1, gamma.sqrt())],
        )
        .unwrap()
    }

    #[test]
    fn rhs_vanishes_without_dynamics() {
        let rho = DensityOperator::basis_state(3, 1);
        let out = lindblad_rhs(rho.matrix(), &CMatrix::zeros(3, 3), &[]).unwrap();
        assert!(out.iter().all(|z| *z == ZERO));
    }

    #[test]
    fn maximally_mixed_is_stationary_under_unitary_part() {
        let h = CMatrix::from_fn(3, 3, |r, k| {
            if r == k {
                c(r as f64, 0.0)
            } else if r < k {
                c(0.3, -0.7)
            } else {
                c(0.3, 0.7)
            }
        });
        let out = lindblad_rhs(DensityOperator::maximally_mixed(3).matrix(), &h, &[]).unwrap();
        assert!(out.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn two_level_decay_rates() {
        let gamma: f64 = 2.5;
        let cop = CollapseOperator::transition(0, 1, gamma.sqrt()).to_dense(2);
        let out =
            lindblad_rhs(DensityOperator::basis_state(2, 1).matrix(), &CMatrix::zeros(2, 2), &[cop])
                .unwrap();
        assert!((out[(1, 1)].re + gamma).abs() < 1e-14);
        assert!((out[(0, 0)].re - gamma).abs() < 1e-14);
    }

    #[test]
    fn dense_rhs_rejects_mismatched_shapes() {
        let err = lindblad_rhs(&CMatrix::zeros(2, 2), &CMatrix::zeros(3, 3), &[]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn sparse_rhs_matches_dense_reference() {
        let mut h = PhasedHamiltonian::new(4);
        h.push(PhasedTerm { row: 0, col: 2, coupling: c(1.3, 0.2), detuning: 5.0 });
        h.push(PhasedTerm { row: 1, col: 2, coupling: c(0.4, -0.9), detuning: -5.0 });
        h.push(PhasedTerm { row: 3, col: 3, coupling: c(0.25, 0.0), detuning: 0.0 });
        let jumps = vec![
            CollapseOperator::transition(0, 2, 0.8),
            CollapseOperator::transition(1, 2, 0.5),
            CollapseOperator::new(vec![(0, 3, c(0.3, 0.1)), (1, 2, c(0.2, 0.0))]),
        ];
        let l = Lindbladian::new(h.clone(), jumps.clone()).unwrap();
        let rho = CMatrix::from_fn(4, 4, |r, k| {
            let v = c(0.1 * (r + k) as f64, 0.05 * (r as f64 - k as f64));
            if r == k { c(0.25, 0.0) } else { v }
        });
        let t = 0.37;
        let dense: Vec<_> = jumps.iter().map(|j| j.to_dense(4)).collect();
        let want = lindblad_rhs(&rho, &h.at(t), &dense).unwrap();
        let got = l.rhs(t, &rho);
        assert!((want - got).iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn zero_duration_is_identity() {
        let l = two_level_decay(1.0);
        let rho = DensityOperator::basis_state(2, 1);
        let res = l.evolve(&rho, 0.0, 0.0, &Tolerances::default()).unwrap();
        assert_eq!(res.final_state, rho);
        assert!(res.fluxes.values().iter().all(|q| *q == 0.0));
    }

    #[test]
    fn negative_duration_is_rejected() {
        let l = two_level_decay(1.0);
        let err = l
            .evolve(&DensityOperator::basis_state(2, 1), 0.0, -1.0, &Tolerances::default())
            .unwrap_err();
        assert!(matches!(err, Error::NegativeDuration(_)));
    }

    #[test]
    fn half_life_decay() {
        let gamma = 1.0 / 7e-9;
        let l = two_level_decay(gamma);
        let res = l
            .evolve(&DensityOperator::basis_state(2, 1), 0.0, 2f64.ln() / gamma, &Tolerances::default())
            .unwrap();
        assert!((res.final_state.population(1) - 0.5).abs() < 1e-6);
        assert!((res.fluxes.values()[0] - 0.5).abs() < 1e-6);
        assert!(res.max_trace_drift < 1e-8);
    }

    #[test]
    fn trace_distance_examples() {
        let a = DensityOperator::basis_state(2, 0);
        let b = DensityOperator::basis_state(2, 1);
        let mixed = DensityOperator::maximally_mixed(2);
        assert!(steady_state_distance(&a, &a).unwrap().abs() < 1e-15);
        assert!((steady_state_distance(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        assert!((steady_state_distance(&a, &mixed).unwrap() - 0.5).abs() < 1e-12);
        assert!(steady_state_distance(&a, &DensityOperator::basis_state(3, 0)).is_err());
    }

    #[test]
    fn highest_frequency_includes_beats() {
        let mut h = PhasedHamiltonian::new(3);
        let two_pi = 2.0 * core::f64::consts::PI;
        h.push(PhasedTerm { row: 0, col: 2, coupling: ONE, detuning: two_pi * 10e6 });
        h.push(PhasedTerm { row: 1, col: 2, coupling: ONE, detuning: -two_pi * 10e6 });
        assert!((h.highest_frequency() - 20e6).abs() < 1e-3);
    }
}
