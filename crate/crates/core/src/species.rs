//! Ion species: fine-structure manifolds, dipole decay paths and repump beams,
//! plus the collapse operators and repump Hamiltonian they induce.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::angular::{wigner3j, HalfInt};
use crate::dynamics::{CollapseOperator, PhasedHamiltonian, PhasedTerm};
use crate::error::{schema, Result};
use crate::linalg::CMatrix;

pub const PLANCK: f64 = 6.626_070_15e-34;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const GROUND_LABEL: &str = "S1/2";
pub const EXCITED_LABEL: &str = "P1/2";

const POLARIZATION_NORM_TOL: f64 = 1e-12;

/// Manifold as written in a species description.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldSpec {
    pub label: String,
    pub j: HalfInt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecaySpec {
    pub upper: String,
    pub lower: String,
    pub einstein_a: f64,
    pub wavelength: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamSpec {
    pub upper: String,
    pub lower: String,
    /// Amplitudes of the (σ⁻, π, σ⁺) components.
    pub polarization: [f64; 3],
    pub detuning_hz: f64,
    pub power: f64,
    pub waist: f64,
}

/// Unvalidated species description, typically parsed from a species file.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesDescription {
    pub name: String,
    pub manifolds: Vec<ManifoldSpec>,
    pub decays: Vec<DecaySpec>,
    pub repump_beams: Vec<BeamSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifold {
    pub label: String,
    pub j: HalfInt,
    /// Basis index of the `m = -J` sublevel.
    pub offset: usize,
}

impl Manifold {
    pub fn size(&self) -> usize {
        self.j.multiplicity()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayPath {
    pub upper: usize,
    pub lower: usize,
    /// Einstein A coefficient, s⁻¹.
    pub einstein_a: f64,
    /// Transition wavelength, m.
    pub wavelength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beam {
    pub path: usize,
    pub polarization: [f64; 3],
    /// rad/s, negative when the beam is red of the transition.
    pub detuning: f64,
    pub power: f64,
    pub waist: f64,
}

impl Beam {
    pub fn peak_intensity(&self) -> f64 {
        2.0 * self.power / (core::f64::consts::PI * self.waist * self.waist)
    }

    /// Amplitude driving `Δm = m_e − m_g`.
    pub fn component(&self, delta_m: i32) -> f64 {
        match delta_m {
            -1 => self.polarization[0],
            0 => self.polarization[1],
            1 => self.polarization[2],
            _ => 0.0,
        }
    }
}

/// A basis level: manifold index and magnetic projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Level {
    pub manifold: usize,
    pub m: HalfInt,
}

/// Spontaneous-emission channel `|g⟩⟨e|` of one decay path.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayChannel {
    pub path: usize,
    pub lower: usize,
    pub upper: usize,
    /// `m_g − m_e`.
    pub q: i32,
    /// Photon reaches the detection optics (P1/2 → S1/2 only).
    pub collectable: bool,
    pub operator: CollapseOperator,
}

impl DecayChannel {
    pub fn amplitude(&self) -> f64 {
        self.operator.entries()[0].2.re
    }
}

/// Validated and indexed species model. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesModel {
    name: String,
    manifolds: Vec<Manifold>,
    decay_paths: Vec<DecayPath>,
    beams: Vec<Beam>,
    levels: Vec<Level>,
}

impl SpeciesModel {
    pub fn from_description(desc: &SpeciesDescription) -> Result<Self> {
        let mut manifolds: Vec<Manifold> = Vec::with_capacity(desc.manifolds.len());
        let mut levels = Vec::new();
        for (i, spec) in desc.manifolds.iter().enumerate() {
            if spec.label.is_empty() {
                return Err(schema(format!("manifolds[{i}].label"), "empty label"));
            }
            if manifolds.iter().any(|m| m.label == spec.label) {
                return Err(schema(format!("manifolds[{i}].label"), format!("duplicate `{}`", spec.label)));
            }
            if spec.j.twice() < 0 {
                return Err(schema(format!("manifolds[{i}].J"), "negative angular momentum"));
            }
            let index = manifolds.len();
            manifolds.push(Manifold { label: spec.label.clone(), j: spec.j, offset: levels.len() });
            levels.extend(spec.j.projections().map(|m| Level { manifold: index, m }));
        }

        for label in [GROUND_LABEL, EXCITED_LABEL] {
            match manifolds.iter().find(|m| m.label == label) {
                None => return Err(schema("manifolds", format!("missing required manifold {label}"))),
                Some(m) if m.j != HalfInt::HALF => {
                    return Err(schema("manifolds", format!("{label} must have J = 1/2")))
                }
                Some(_) => {}
            }
        }

        let find = |field: String, label: &str| -> Result<usize> {
            manifolds
                .iter()
                .position(|m| m.label == label)
                .ok_or_else(|| schema(field, format!("unknown manifold `{label}`")))
        };

        let mut decay_paths = Vec::with_capacity(desc.decays.len());
        for (i, d) in desc.decays.iter().enumerate() {
            let upper = find(format!("decays[{i}].upper"), &d.upper)?;
            let lower = find(format!("decays[{i}].lower"), &d.lower)?;
            if upper == lower {
                return Err(schema(format!("decays[{i}]"), "upper and lower manifolds coincide"));
            }
            if !(d.einstein_a > 0.0) || !d.einstein_a.is_finite() {
                return Err(schema(format!("decays[{i}].einstein_A_per_s"), "must be positive"));
            }
            if !(d.wavelength > 0.0) || !d.wavelength.is_finite() {
                return Err(schema(format!("decays[{i}].wavelength_m"), "must be positive"));
            }
            if decay_paths.iter().any(|p: &DecayPath| p.upper == upper && p.lower == lower) {
                return Err(schema(format!("decays[{i}]"), "duplicate decay path"));
            }
            decay_paths.push(DecayPath { upper, lower, einstein_a: d.einstein_a, wavelength: d.wavelength });
        }

        let mut beams = Vec::with_capacity(desc.repump_beams.len());
        for (i, b) in desc.repump_beams.iter().enumerate() {
            let upper = find(format!("repump_beams[{i}].upper"), &b.upper)?;
            let lower = find(format!("repump_beams[{i}].lower"), &b.lower)?;
            let path = decay_paths
                .iter()
                .position(|p| p.upper == upper && p.lower == lower)
                .ok_or_else(|| {
                    schema(
                        format!("repump_beams[{i}]"),
                        format!("no decay path {} -> {} to drive", b.upper, b.lower),
                    )
                })?;
            let norm: f64 = b.polarization.iter().map(|x| x * x).sum();
            if (norm - 1.0).abs() > POLARIZATION_NORM_TOL {
                return Err(schema(
                    format!("repump_beams[{i}].pol"),
                    format!("polarization norm² is {norm}, expected 1"),
                ));
            }
            if !(b.power >= 0.0) || !b.power.is_finite() {
                return Err(schema(format!("repump_beams[{i}].power_w"), "must be non-negative"));
            }
            if !(b.waist > 0.0) || !b.waist.is_finite() {
                return Err(schema(format!("repump_beams[{i}].waist_m"), "must be positive"));
            }
            if !b.detuning_hz.is_finite() {
                return Err(schema(format!("repump_beams[{i}].detuning_hz"), "must be finite"));
            }
            beams.push(Beam {
                path,
                polarization: b.polarization,
                detuning: 2.0 * core::f64::consts::PI * b.detuning_hz,
                power: b.power,
                waist: b.waist,
            });
        }

        Ok(SpeciesModel { name: desc.name.clone(), manifolds, decay_paths, beams, levels })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn manifolds(&self) -> &[Manifold] {
        &self.manifolds
    }

    pub fn decay_paths(&self) -> &[DecayPath] {
        &self.decay_paths
    }

    pub fn beams(&self) -> &[Beam] {
        &self.beams
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, index: usize) -> Level {
        self.levels[index]
    }

    pub fn manifold_index(&self, label: &str) -> Option<usize> {
        self.manifolds.iter().position(|m| m.label == label)
    }

    /// Basis index of sublevel `m` in `manifold`.
    pub fn index(&self, manifold: usize, m: HalfInt) -> Option<usize> {
        let man = self.manifolds.get(manifold)?;
        let k = m.twice() + man.j.twice();
        if k < 0 || k > 2 * man.j.twice() || k % 2 != 0 {
            return None;
        }
        Some(man.offset + (k / 2) as usize)
    }

    pub fn index_by_label(&self, label: &str, m: HalfInt) -> Option<usize> {
        self.index(self.manifold_index(label)?, m)
    }

    /// Basis indices of every sublevel of `manifold`.
    pub fn sublevels(&self, manifold: usize) -> core::ops::Range<usize> {
        let man = &self.manifolds[manifold];
        man.offset..man.offset + man.size()
    }

    /// Radiative lifetime of `manifold` in seconds, `None` if it does not decay.
    pub fn lifetime(&self, manifold: usize) -> Option<f64> {
        let total: f64 =
            self.decay_paths.iter().filter(|p| p.upper == manifold).map(|p| p.einstein_a).sum();
        (total > 0.0).then(|| 1.0 / total)
    }

    pub fn label_of(&self, index: usize) -> String {
        let l = self.levels[index];
        format!("{}(m={})", self.manifolds[l.manifold].label, l.m)
    }

    fn is_collectable(&self, path: &DecayPath) -> bool {
        self.manifolds[path.upper].label == EXCITED_LABEL
            && self.manifolds[path.lower].label == GROUND_LABEL
    }

    /// Dipole matrix-element weight `√(2J_e+1) · (J_g 1 J_e; m_g, m_e−m_g, −m_e)`.
    fn dipole_weight(&self, path: &DecayPath, g: usize, e: usize) -> f64 {
        let (lg, le) = (self.levels[g], self.levels[e]);
        let jg = self.manifolds[path.lower].j;
        let je = self.manifolds[path.upper].j;
        let w = wigner3j(jg, HalfInt::ONE, je, lg.m, le.m - lg.m, -le.m).unwrap_or(0.0);
        f64::from(je.twice() + 1).sqrt() * w
    }

    /// One collapse operator per (decay path, g, e) with a nonzero dipole element.
    pub fn collapse_operators(&self) -> Vec<DecayChannel> {
        let mut out = Vec::new();
        for (p, path) in self.decay_paths.iter().enumerate() {
            let collectable = self.is_collectable(path);
            for e in self.sublevels(path.upper) {
                for g in self.sublevels(path.lower) {
                    let w = self.dipole_weight(path, g, e);
                    if w == 0.0 {
                        continue;
                    }
                    let amplitude = path.einstein_a.sqrt() * w;
                    out.push(DecayChannel {
                        path: p,
                        lower: g,
                        upper: e,
                        q: (self.levels[g].m - self.levels[e].m).twice() / 2,
                        collectable,
                        operator: CollapseOperator::transition(g, e, amplitude),
                    });
                }
            }
        }
        out
    }

    /// `I_sat = π h c Γ / (3 λ³)` for the beam's transition, W/m².
    pub fn saturation_intensity(&self, beam: &Beam) -> f64 {
        let path = &self.decay_paths[beam.path];
        core::f64::consts::PI * PLANCK * SPEED_OF_LIGHT * path.einstein_a
            / (3.0 * path.wavelength.powi(3))
    }

    /// `Ω_red = Γ √(I / 2I_sat)`, rad/s.
    pub fn reduced_rabi_frequency(&self, beam: &Beam) -> f64 {
        let gamma = self.decay_paths[beam.path].einstein_a;
        gamma * (beam.peak_intensity() / (2.0 * self.saturation_intensity(beam))).sqrt()
    }

    /// Rabi coupling of `beam` between lower level `g` and upper level `e`.
    pub fn rabi_frequency(&self, beam: &Beam, g: usize, e: usize) -> Complex64 {
        let path = &self.decay_paths[beam.path];
        let (lg, le) = (self.levels[g], self.levels[e]);
        if lg.manifold != path.lower || le.manifold != path.upper {
            return Complex64::new(0.0, 0.0);
        }
        let delta_m = (le.m - lg.m).twice();
        if delta_m % 2 != 0 || delta_m.abs() > 2 {
            return Complex64::new(0.0, 0.0);
        }
        let pol = beam.component(delta_m / 2);
        if pol == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(self.reduced_rabi_frequency(beam) * pol * self.dipole_weight(path, g, e), 0.0)
    }

    /// Repump Hamiltonian `Σ Ω e^{iΔt}|g⟩⟨e| + h.c.` in the per-manifold rotating frame.
    pub fn repump_hamiltonian(&self) -> PhasedHamiltonian {
        let mut h = PhasedHamiltonian::new(self.dim());
        for beam in &self.beams {
            let path = &self.decay_paths[beam.path];
            for g in self.sublevels(path.lower) {
                for e in self.sublevels(path.upper) {
                    let omega = self.rabi_frequency(beam, g, e);
                    if omega.norm() == 0.0 {
                        continue;
                    }
                    h.push(PhasedTerm { row: g, col: e, coupling: omega, detuning: beam.detuning });
                }
            }
        }
        h
    }

    pub fn repump_hamiltonian_at(&self, t: f64) -> CMatrix {
        self.repump_hamiltonian().at(t)
    }

    /// Short description used in diagnostics.
    pub fn summary(&self) -> String {
        let labels: Vec<String> = self.manifolds.iter().map(|m| m.label.to_string()).collect();
        format!("{}: {} levels [{}]", self.name, self.dim(), labels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn manifold(label: &str, twice_j: i32) -> ManifoldSpec {
        ManifoldSpec { label: label.to_string(), j: HalfInt::from_twice(twice_j) }
    }

    fn decay(upper: &str, lower: &str, a: f64, lambda: f64) -> DecaySpec {
        DecaySpec { upper: upper.into(), lower: lower.into(), einstein_a: a, wavelength: lambda }
    }

    fn beam(upper: &str, lower: &str, pol: [f64; 3], det: f64) -> BeamSpec {
        BeamSpec {
            upper: upper.into(),
            lower: lower.into(),
            polarization: pol,
            detuning_hz: det,
            power: 10e-6,
            waist: 30e-6,
        }
    }

    fn calcium_like() -> SpeciesDescription {
        SpeciesDescription {
            name: "toy".into(),
            manifolds: vec![
                manifold("S1/2", 1),
                manifold("P1/2", 1),
                manifold("P3/2", 3),
                manifold("D3/2", 3),
                manifold("D5/2", 5),
            ],
            decays: vec![
                decay("P1/2", "S1/2", 1.35e8, 397e-9),
                decay("P1/2", "D3/2", 9.3e6, 866e-9),
                decay("P3/2", "S1/2", 1.4e8, 393e-9),
                decay("P3/2", "D3/2", 1.0e6, 850e-9),
                decay("P3/2", "D5/2", 8.8e6, 854e-9),
            ],
            repump_beams: vec![
                beam("P3/2", "D3/2", [0.0, 0.0, 1.0], 10e6),
                beam("P3/2", "D3/2", [1.0, 0.0, 0.0], -10e6),
                beam("P3/2", "D5/2", [0.0, 0.0, 1.0], 10e6),
                beam("P3/2", "D5/2", [1.0, 0.0, 0.0], -10e6),
            ],
        }
    }

    #[test]
    fn basis_ordering_is_file_order_m_ascending() {
        let model = SpeciesModel::from_description(&calcium_like()).unwrap();
        assert_eq!(model.dim(), 18);
        assert_eq!(model.index_by_label("S1/2", HalfInt::from_twice(-1)), Some(0));
        assert_eq!(model.index_by_label("S1/2", HalfInt::from_twice(1)), Some(1));
        assert_eq!(model.index_by_label("P3/2", HalfInt::from_twice(-3)), Some(4));
        assert_eq!(model.index_by_label("D5/2", HalfInt::from_twice(5)), Some(17));
        assert_eq!(model.index_by_label("D5/2", HalfInt::from_twice(7)), None);
        for (k, l) in model.levels().iter().enumerate() {
            assert_eq!(model.index(l.manifold, l.m), Some(k));
        }
    }

    #[test]
    fn missing_required_manifold() {
        let mut d = calcium_like();
        d.manifolds.retain(|m| m.label != "P1/2");
        d.decays.retain(|x| x.upper != "P1/2");
        let err = SpeciesModel::from_description(&d).unwrap_err();
        assert!(alloc::format!("{err}").contains("P1/2"));
    }

    #[test]
    fn unknown_manifold_reference_names_field() {
        let mut d = calcium_like();
        d.decays[1].lower = "D7/2".into();
        let err = SpeciesModel::from_description(&d).unwrap_err();
        assert!(alloc::format!("{err}").contains("decays[1].lower"), "{err}");
    }

    #[test]
    fn unnormalized_polarization_is_rejected() {
        let mut d = calcium_like();
        d.repump_beams[0].polarization = [1.0, 1.0, 0.0];
        let err = SpeciesModel::from_description(&d).unwrap_err();
        assert!(alloc::format!("{err}").contains("repump_beams[0].pol"), "{err}");

        let s = 0.5f64.sqrt();
        d.repump_beams[0].polarization = [s, s, 0.0];
        assert!(SpeciesModel::from_description(&d).is_ok());
    }

    #[test]
    fn beam_needs_existing_path() {
        let mut d = calcium_like();
        d.repump_beams[0].lower = "S1/2".into();
        d.repump_beams[0].upper = "D5/2".into();
        let err = SpeciesModel::from_description(&d).unwrap_err();
        assert!(alloc::format!("{err}").contains("repump_beams[0]"), "{err}");
    }

    #[test]
    fn forbidden_zero_zero_path_has_no_channels() {
        let d = SpeciesDescription {
            name: "zero".into(),
            manifolds: vec![manifold("S1/2", 1), manifold("P1/2", 1), manifold("A", 0), manifold("B", 0)],
            decays: vec![decay("B", "A", 1e6, 500e-9)],
            repump_beams: vec![],
        };
        let model = SpeciesModel::from_description(&d).unwrap();
        assert!(model.collapse_operators().is_empty());
    }

    #[test]
    fn decay_completeness() {
        let model = SpeciesModel::from_description(&calcium_like()).unwrap();
        let channels = model.collapse_operators();
        for (e, level) in model.levels().iter().enumerate() {
            let total: f64 = channels.iter().filter(|c| c.upper == e).map(|c| c.amplitude().powi(2)).sum();
            let expected: f64 = model
                .decay_paths()
                .iter()
                .filter(|p| p.upper == level.manifold)
                .map(|p| p.einstein_a)
                .sum();
            assert!((total - expected).abs() <= 1e-10 * expected.max(1.0), "level {e}");
        }
    }

    #[test]
    fn p_half_branches_to_s_and_d() {
        let model = SpeciesModel::from_description(&calcium_like()).unwrap();
        let channels = model.collapse_operators();
        let p = model.index_by_label("P1/2", HalfInt::HALF).unwrap();
        let s = model.manifold_index("S1/2").unwrap();
        let d = model.manifold_index("D3/2").unwrap();
        let rate_to = |man: usize| -> f64 {
            channels
                .iter()
                .filter(|c| c.upper == p && model.level(c.lower).manifold == man)
                .map(|c| c.amplitude().powi(2))
                .sum()
        };
        assert!((rate_to(s) / rate_to(d) - 1.35e8 / 9.3e6).abs() < 1e-9);
        assert!(channels.iter().filter(|c| c.collectable).all(|c| {
            model.level(c.upper).manifold == model.manifold_index("P1/2").unwrap()
                && model.level(c.lower).manifold == s
        }));
        assert_eq!(channels.iter().filter(|c| c.collectable).count(), 4);
    }

    #[test]
    fn rabi_closed_form() {
        let model = SpeciesModel::from_description(&calcium_like()).unwrap();
        let b = model.beams()[0];
        let path = model.decay_paths()[b.path];
        let intensity = 2.0 * 10e-6 / (core::f64::consts::PI * 30e-6 * 30e-6);
        let isat = core::f64::consts::PI * PLANCK * SPEED_OF_LIGHT * path.einstein_a
            / (3.0 * path.wavelength.powi(3));
        let expected = path.einstein_a * (intensity / (2.0 * isat)).sqrt();
        assert!((model.reduced_rabi_frequency(&b) - expected).abs() < 1e-6 * expected);
    }

    #[test]
    fn polarization_selects_transitions() {
        let model = SpeciesModel::from_description(&calcium_like()).unwrap();
        let sigma_plus = model.beams()[0];
        let g = model.index_by_label("D3/2", HalfInt::HALF).unwrap();
        let e_pi = model.index_by_label("P3/2", HalfInt::HALF).unwrap();
        let e_up = model.index_by_label("P3/2", HalfInt::from_twice(3)).unwrap();
        assert_eq!(model.rabi_frequency(&sigma_plus, g, e_pi).norm(), 0.0);
        assert!(model.rabi_frequency(&sigma_plus, g, e_up).norm() > 0.0);
    }

    #[test]
    fn rabi_scales_with_sqrt_power() {
        let mut d = calcium_like();
        let model = SpeciesModel::from_description(&d).unwrap();
        for b in &mut d.repump_beams {
            b.power *= 2.0;
        }
        let doubled = SpeciesModel::from_description(&d).unwrap();
        let h1 = model.repump_hamiltonian();
        let h2 = doubled.repump_hamiltonian();
        assert_eq!(h1.terms().len(), h2.terms().len());
        for (a, b) in h1.terms().iter().zip(h2.terms()) {
            assert!((b.coupling / a.coupling - 2f64.sqrt()).norm() < 1e-12);
        }
    }

    #[test]
    fn no_beams_zero_hamiltonian() {
        let mut d = calcium_like();
        d.repump_beams.clear();
        let model = SpeciesModel::from_description(&d).unwrap();
        assert!(model.repump_hamiltonian_at(1e-8).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn resonant_single_beam_is_static() {
        let mut d = calcium_like();
        d.repump_beams.truncate(1);
        d.repump_beams[0].detuning_hz = 0.0;
        let model = SpeciesModel::from_description(&d).unwrap();
        let diff = model.repump_hamiltonian_at(3e-9) - model.repump_hamiltonian_at(41e-9);
        assert_eq!(diff.norm(), 0.0);
    }

    #[test]
    fn opposite_detunings_beat_at_twenty_megahertz() {
        let model = SpeciesModel::from_description(&calcium_like()).unwrap();
        let h = model.repump_hamiltonian();
        assert!((h.highest_frequency() - 20e6).abs() < 1e-3);
        // a σ⁺ and a σ⁻ element on D5/2 share P3/2(m=1/2); their relative phase
        // returns after 1/(20 MHz)
        let p = model.index_by_label("P3/2", HalfInt::HALF).unwrap();
        let d_lo = model.index_by_label("D5/2", HalfInt::from_twice(-1)).unwrap();
        let d_hi = model.index_by_label("D5/2", HalfInt::from_twice(3)).unwrap();
        let rel = |t: f64| {
            let m = model.repump_hamiltonian_at(t);
            m[(d_lo, p)] / m[(d_hi, p)]
        };
        let r0 = rel(0.0);
        assert!((rel(50e-9) - r0).norm() < 1e-9 * r0.norm());
        assert!((rel(25e-9) + r0).norm() < 1e-9 * r0.norm());
    }
}
