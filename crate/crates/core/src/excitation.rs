//! Circularly polarized π-pulse on the S1/2 ⊕ P1/2 block, with optional
//! birefringent polarization impurity.
//!
//! A σ⁺ drive couples `|S₋⟩ ↔ |P₊⟩` (the "+" block) and a σ⁻ drive couples
//! `|S₊⟩ ↔ |P₋⟩` (the "−" block). Birefringence with axis angle α and
//! retardance β leaks part of the intended handedness into the other one; the
//! resulting channel averages α uniformly and β over a normal distribution.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::angular::HalfInt;
use crate::dynamics::DensityOperator;
use crate::error::{schema, Result};
use crate::linalg::{CMatrix, I, ONE, ZERO};
use crate::quadrature::gaussian_rule;
use crate::species::{SpeciesModel, EXCITED_LABEL, GROUND_LABEL};

pub const DEFAULT_QUADRATURE_NODES: usize = 21;

/// Equal-weight α nodes; exact for the trigonometric polynomials (degree ≤ 4 in α)
/// that appear in the propagator products.
const ALPHA_NODES: usize = 8;

/// Ideal handedness of an excitation pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Handedness {
    /// σ⁺-driving.
    Right,
    /// σ⁻-driving.
    Left,
}

impl Handedness {
    pub fn flip(self) -> Self {
        match self {
            Handedness::Right => Handedness::Left,
            Handedness::Left => Handedness::Right,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Handedness::Right => 'R',
            Handedness::Left => 'L',
        }
    }
}

/// Basis indices of the four S1/2 and P1/2 sublevels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpBlock {
    pub dim: usize,
    pub s_minus: usize,
    pub s_plus: usize,
    pub p_minus: usize,
    pub p_plus: usize,
}

impl SpBlock {
    pub fn from_model(model: &SpeciesModel) -> Result<Self> {
        let lookup = |label: &str, twice_m: i32| {
            model
                .index_by_label(label, HalfInt::from_twice(twice_m))
                .ok_or_else(|| schema("manifolds", alloc::format!("{label} lacks m = {twice_m}/2")))
        };
        Ok(SpBlock {
            dim: model.dim(),
            s_minus: lookup(GROUND_LABEL, -1)?,
            s_plus: lookup(GROUND_LABEL, 1)?,
            p_minus: lookup(EXCITED_LABEL, -1)?,
            p_plus: lookup(EXCITED_LABEL, 1)?,
        })
    }

    /// `(S, P)` pair of the block driven by σ⁺ (`plus = true`) or σ⁻.
    pub fn pair(&self, plus: bool) -> (usize, usize) {
        if plus {
            (self.s_minus, self.p_plus)
        } else {
            (self.s_plus, self.p_minus)
        }
    }

    /// Upper sublevel a pulse of handedness `h` is meant to populate.
    pub fn right_sublevel(&self, h: Handedness) -> usize {
        match h {
            Handedness::Right => self.p_plus,
            Handedness::Left => self.p_minus,
        }
    }

    pub fn wrong_sublevel(&self, h: Handedness) -> usize {
        self.right_sublevel(h.flip())
    }

    fn members(&self) -> [usize; 4] {
        [self.s_minus, self.s_plus, self.p_minus, self.p_plus]
    }

    fn contains(&self, k: usize) -> bool {
        self.members().contains(&k)
    }
}

/// Circular components `(c₊, c₋)` of a pulse of ideal handedness `h` after a
/// birefringent element with axis angle `alpha` and retardance `beta`.
pub fn jones_coefficients(h: Handedness, alpha: f64, beta: f64) -> (Complex64, Complex64) {
    let (s, c) = ((beta / 2.0).sin(), (beta / 2.0).cos());
    match h {
        Handedness::Right => (Complex64::new(c, 0.0), I * Complex64::from_polar(s, -2.0 * alpha)),
        Handedness::Left => (I * Complex64::from_polar(s, 2.0 * alpha), Complex64::new(c, 0.0)),
    }
}

/// Unitary `U₊ + U₋ + 1_rest` for complex pulse areas on the two blocks.
///
/// `U_± = cos(|θ|/2) 1_± − i sin(|θ|/2) X_{φ,±}` with `φ = arg θ` and
/// `X_φ = e^{iφ}|S⟩⟨P| + e^{−iφ}|P⟩⟨S|`.
pub fn pulse_propagator(block: &SpBlock, theta_plus: Complex64, theta_minus: Complex64) -> CMatrix {
    let mut u = CMatrix::identity(block.dim, block.dim);
    for (plus, theta) in [(true, theta_plus), (false, theta_minus)] {
        let (s, p) = block.pair(plus);
        let half = theta.norm() / 2.0;
        let phase = if theta.norm() == 0.0 { ONE } else { theta / theta.norm() };
        let cos = Complex64::new(half.cos(), 0.0);
        let sin = half.sin();
        u[(s, s)] = cos;
        u[(p, p)] = cos;
        u[(s, p)] = -I * sin * phase;
        u[(p, s)] = -I * sin * phase.conj();
    }
    u
}

fn conjugate(u: &CMatrix, rho: &CMatrix) -> CMatrix {
    u * rho * u.adjoint()
}

/// Perfect π pulse of handedness `h`.
pub fn apply_ideal_pulse(rho: &DensityOperator, block: &SpBlock, h: Handedness) -> DensityOperator {
    let (tp, tm) = match h {
        Handedness::Right => (Complex64::new(PI, 0.0), ZERO),
        Handedness::Left => (ZERO, Complex64::new(PI, 0.0)),
    };
    let u = pulse_propagator(block, tp, tm);
    DensityOperator::from_matrix(conjugate(&u, rho.matrix())).expect("square")
}

/// Birefringence-averaged excitation channel for one handedness.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseChannel {
    handedness: Handedness,
    sigma_beta: f64,
    quadrature: Vec<(f64, f64)>,
    /// Keep the α-surviving cross terms (full unitary average) instead of the
    /// four-term block-dephasing form.
    cross_terms: bool,
    /// Averaged `sin²(π|c_±|/2)` for the + and − blocks.
    flip_plus: f64,
    flip_minus: f64,
}

impl PulseChannel {
    pub fn new(handedness: Handedness, sigma_beta: f64) -> Self {
        Self::with_nodes(handedness, sigma_beta, DEFAULT_QUADRATURE_NODES)
    }

    pub fn ideal(handedness: Handedness) -> Self {
        Self::new(handedness, 0.0)
    }

    pub fn with_nodes(handedness: Handedness, sigma_beta: f64, nodes: usize) -> Self {
        assert!(sigma_beta >= 0.0, "retardance spread must be non-negative");
        let quadrature = gaussian_rule(nodes, sigma_beta);
        let mut flip_plus = 0.0;
        let mut flip_minus = 0.0;
        for &(beta, w) in &quadrature {
            // |c| does not depend on α
            let (cp, cm) = jones_coefficients(handedness, 0.0, beta);
            flip_plus += w * (PI * cp.norm() / 2.0).sin().powi(2);
            flip_minus += w * (PI * cm.norm() / 2.0).sin().powi(2);
        }
        PulseChannel { handedness, sigma_beta, quadrature, cross_terms: false, flip_plus, flip_minus }
    }

    pub fn with_cross_terms(mut self, keep: bool) -> Self {
        self.cross_terms = keep;
        self
    }

    pub fn handedness(&self) -> Handedness {
        self.handedness
    }

    pub fn sigma_beta(&self) -> f64 {
        self.sigma_beta
    }

    pub fn quadrature(&self) -> &[(f64, f64)] {
        &self.quadrature
    }

    /// Probability of transferring population across the block the pulse is
    /// not meant to drive (`|S₊⟩ → |P₋⟩` for a right-handed pulse).
    pub fn wrong_transfer_probability(&self) -> f64 {
        match self.handedness {
            Handedness::Right => self.flip_minus,
            Handedness::Left => self.flip_plus,
        }
    }

    /// Transfer probability on the intended block.
    pub fn right_transfer_probability(&self) -> f64 {
        match self.handedness {
            Handedness::Right => self.flip_plus,
            Handedness::Left => self.flip_minus,
        }
    }

    /// Apply the channel to an arbitrary operator (linear map).
    pub fn apply(&self, block: &SpBlock, rho: &CMatrix) -> CMatrix {
        if self.cross_terms {
            self.apply_full(block, rho)
        } else {
            self.apply_four_term(block, rho)
        }
    }

    fn apply_four_term(&self, block: &SpBlock, rho: &CMatrix) -> CMatrix {
        let d = block.dim;
        let mut out = CMatrix::zeros(d, d);
        for c in 0..d {
            if block.contains(c) {
                continue;
            }
            for r in 0..d {
                if !block.contains(r) {
                    out[(r, c)] = rho[(r, c)];
                }
            }
        }
        for (plus, flip) in [(true, self.flip_plus), (false, self.flip_minus)] {
            let (s, p) = block.pair(plus);
            let keep = 1.0 - flip;
            out[(s, s)] = rho[(s, s)] * keep + rho[(p, p)] * flip;
            out[(p, p)] = rho[(p, p)] * keep + rho[(s, s)] * flip;
            out[(s, p)] = rho[(s, p)] * keep;
            out[(p, s)] = rho[(p, s)] * keep;
        }
        out
    }

    fn apply_full(&self, block: &SpBlock, rho: &CMatrix) -> CMatrix {
        let d = block.dim;
        let mut out = CMatrix::zeros(d, d);
        for &(beta, w) in &self.quadrature {
            for k in 0..ALPHA_NODES {
                let alpha = PI * k as f64 / ALPHA_NODES as f64;
                let (cp, cm) = jones_coefficients(self.handedness, alpha, beta);
                let u = pulse_propagator(block, cp * PI, cm * PI);
                out += conjugate(&u, rho) * Complex64::new(w / ALPHA_NODES as f64, 0.0);
            }
        }
        out
    }

    /// Choi matrix `Σ |i⟩⟨j| ⊗ E(|i⟩⟨j|)` restricted to the S ⊕ P block (16×16).
    pub fn choi_matrix(&self, block: &SpBlock) -> CMatrix {
        let members = block.members();
        let n = members.len();
        let mut choi = CMatrix::zeros(n * n, n * n);
        for (i, &bi) in members.iter().enumerate() {
            for (j, &bj) in members.iter().enumerate() {
                let mut unit = CMatrix::zeros(block.dim, block.dim);
                unit[(bi, bj)] = ONE;
                let image = self.apply(block, &unit);
                for (a, &ba) in members.iter().enumerate() {
                    for (b, &bb) in members.iter().enumerate() {
                        choi[(i * n + a, j * n + b)] = image[(ba, bb)];
                    }
                }
            }
        }
        choi
    }
}

/// Apply a birefringent excitation channel to a density operator.
pub fn apply_birefringent_pulse(
    rho: &DensityOperator,
    block: &SpBlock,
    channel: &PulseChannel,
) -> DensityOperator {
    DensityOperator::from_matrix(channel.apply(block, rho.matrix())).expect("square")
}

/// Small-spread estimate `π² σ_β² / 16` of the wrong-block transfer probability.
pub fn wrong_excitation_probability(sigma_beta: f64) -> f64 {
    PI * PI * sigma_beta * sigma_beta / 16.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    fn block() -> SpBlock {
        // S-, S+, P-, P+ followed by two spectator levels
        SpBlock { dim: 6, s_minus: 0, s_plus: 1, p_minus: 2, p_plus: 3 }
    }

    fn pure(k: usize) -> DensityOperator {
        DensityOperator::basis_state(6, k)
    }

    #[test]
    fn flipping_twice_is_identity() {
        for h in [Handedness::Right, Handedness::Left] {
            assert_eq!(h.flip().flip(), h);
            assert_ne!(h.flip(), h);
        }
    }

    #[test]
    fn jones_without_retardance() {
        let (cp, cm) = jones_coefficients(Handedness::Right, 0.7, 0.0);
        assert_eq!(cp, ONE);
        assert_eq!(cm.norm(), 0.0);
    }

    #[test]
    fn jones_half_wave() {
        let (cp, cm) = jones_coefficients(Handedness::Right, 0.0, PI);
        assert!(cp.norm() < 1e-15);
        assert!((cm - I).norm() < 1e-15);
    }

    #[test]
    fn ideal_pulse_swaps_addressed_block_only() {
        let b = block();
        let out = apply_ideal_pulse(&pure(0), &b, Handedness::Right);
        assert!((out.population(3) - 1.0).abs() < 1e-15);
        let untouched = apply_ideal_pulse(&pure(1), &b, Handedness::Right);
        assert_eq!(untouched, pure(1));
        let spectator = apply_ideal_pulse(&pure(5), &b, Handedness::Left);
        assert_eq!(spectator, pure(5));
    }

    #[test]
    fn propagator_edge_cases() {
        let b = block();
        assert_eq!(pulse_propagator(&b, ZERO, ZERO), CMatrix::identity(6, 6));
        let u = pulse_propagator(&b, Complex64::new(PI, 0.0), ZERO);
        assert!((u[(3, 0)] + I).norm() < 1e-15);
        assert!((u[(0, 3)] + I).norm() < 1e-15);
        assert!(u[(0, 0)].norm() < 1e-15);
        assert_eq!(u[(1, 1)], ONE);
        let unitary = &u * u.adjoint();
        assert!((unitary - CMatrix::identity(6, 6)).norm() < 1e-14);
    }

    #[test]
    fn zero_spread_matches_ideal_on_populations() {
        let b = block();
        let mut rho = CMatrix::zeros(6, 6);
        for (k, p) in [0.1, 0.2, 0.3, 0.15, 0.15, 0.1].iter().enumerate() {
            rho[(k, k)] = Complex64::new(*p, 0.0);
        }
        rho[(4, 5)] = Complex64::new(0.02, 0.01);
        rho[(5, 4)] = Complex64::new(0.02, -0.01);
        let rho = DensityOperator::from_matrix(rho).unwrap();
        for h in [Handedness::Right, Handedness::Left] {
            let ideal = apply_ideal_pulse(&rho, &b, h);
            let channel = apply_birefringent_pulse(&rho, &b, &PulseChannel::ideal(h));
            assert!((ideal.matrix() - channel.matrix()).norm() < 1e-12);
        }
    }

    #[test]
    fn cross_term_variant_is_exact_at_zero_spread() {
        let b = block();
        let rho = CMatrix::from_fn(6, 6, |r, c| {
            if r == c { Complex64::new(1.0 / 6.0, 0.0) } else { Complex64::new(0.01, 0.002 * (r as f64 - c as f64)) }
        });
        let rho = DensityOperator::from_matrix(rho).unwrap();
        let chan = PulseChannel::ideal(Handedness::Right).with_cross_terms(true);
        let ideal = apply_ideal_pulse(&rho, &b, Handedness::Right);
        let full = apply_birefringent_pulse(&rho, &b, &chan);
        assert!((ideal.matrix() - full.matrix()).norm() < 1e-12);
    }

    #[test]
    fn wrong_excitation_at_reference_spread() {
        let sigma = 0.02f64.sqrt();
        let b = block();
        let out = apply_birefringent_pulse(&pure(1), &b, &PulseChannel::new(Handedness::Right, sigma));
        let analytic = wrong_excitation_probability(sigma);
        assert!((analytic - 0.012337).abs() < 1e-6);
        // O(σ⁴) agreement
        assert!((out.population(2) - analytic).abs() < 4.0 * sigma.powi(4));
    }

    #[test]
    fn analytic_expansion_close_at_tenth() {
        let chan = PulseChannel::new(Handedness::Left, 0.1);
        assert!((chan.wrong_transfer_probability() - wrong_excitation_probability(0.1)).abs() < 1e-4);
        assert_eq!(wrong_excitation_probability(0.0), 0.0);
    }

    #[test]
    fn unital_on_block_populations() {
        let b = block();
        let mut rho = CMatrix::zeros(6, 6);
        for k in 0..4 {
            rho[(k, k)] = Complex64::new(0.25, 0.0);
        }
        let chan = PulseChannel::new(Handedness::Right, 0.3);
        let out = chan.apply(&b, &rho);
        for k in 0..4 {
            assert!((out[(k, k)].re - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn choi_is_positive_for_both_variants() {
        let b = block();
        for cross in [false, true] {
            let chan = PulseChannel::new(Handedness::Right, 0.2).with_cross_terms(cross);
            let choi = chan.choi_matrix(&b);
            assert!(linalg::hermiticity_error(&choi) < 1e-12);
            let min = linalg::hermitian_eigenvalues(&choi)[0];
            assert!(min >= -1e-9, "cross = {cross}: {min}");
        }
    }
}
