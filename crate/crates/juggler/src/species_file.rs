//! JSON species files and the built-in set shipped under `data/species/`.

use std::path::Path;

use anyhow::{Context, Result};
use juggler_core::angular::HalfInt;
use juggler_core::species::{BeamSpec, DecaySpec, ManifoldSpec};
use juggler_core::{SpeciesDescription, SpeciesModel};
use serde::Deserialize;

/// Names and contents of the built-in species files.
pub const BUILTIN: [(&str, &str); 5] = [
    ("mg", include_str!("../../../data/species/mg.json")),
    ("ca", include_str!("../../../data/species/ca.json")),
    ("sr", include_str!("../../../data/species/sr.json")),
    ("ba", include_str!("../../../data/species/ba.json")),
    ("yb", include_str!("../../../data/species/yb.json")),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileManifold {
    label: String,
    #[serde(rename = "J")]
    j: String,
    #[serde(rename = "ref", default)]
    _citation: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDecay {
    upper: String,
    lower: String,
    #[serde(rename = "einstein_A_per_s")]
    einstein_a_per_s: f64,
    wavelength_m: f64,
    #[serde(rename = "ref", default)]
    _citation: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileBeam {
    upper: String,
    lower: String,
    pol: [f64; 3],
    detuning_hz: f64,
    power_w: f64,
    waist_m: f64,
    #[serde(rename = "ref", default)]
    _citation: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSpecies {
    name: String,
    manifolds: Vec<FileManifold>,
    decays: Vec<FileDecay>,
    #[serde(default)]
    repump_beams: Vec<FileBeam>,
    #[serde(rename = "ref", default)]
    _citation: Option<String>,
}

fn convert(file: FileSpecies) -> Result<SpeciesDescription> {
    let manifolds = file
        .manifolds
        .into_iter()
        .enumerate()
        .map(|(k, m)| {
            let j: HalfInt = m
                .j
                .parse()
                .map_err(|e| anyhow::anyhow!("manifolds[{k}].J: {e}"))?;
            Ok(ManifoldSpec { label: m.label, j })
        })
        .collect::<Result<_>>()?;
    Ok(SpeciesDescription {
        name: file.name,
        manifolds,
        decays: file
            .decays
            .into_iter()
            .map(|d| DecaySpec {
                upper: d.upper,
                lower: d.lower,
                einstein_a: d.einstein_a_per_s,
                wavelength: d.wavelength_m,
            })
            .collect(),
        repump_beams: file
            .repump_beams
            .into_iter()
            .map(|b| BeamSpec {
                upper: b.upper,
                lower: b.lower,
                polarization: b.pol,
                detuning_hz: b.detuning_hz,
                power: b.power_w,
                waist: b.waist_m,
            })
            .collect(),
    })
}

/// Parse a species document.
pub fn parse_species(text: &str) -> Result<SpeciesModel> {
    let file: FileSpecies = serde_json::from_str(text).context("malformed species file")?;
    let desc = convert(file)?;
    Ok(SpeciesModel::from_description(&desc)?)
}

pub fn load_species(path: &Path) -> Result<SpeciesModel> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading species file {}", path.display()))?;
    parse_species(&text).with_context(|| format!("in species file {}", path.display()))
}

/// Resolve a species by built-in key (`ca`, `Ca+`, ...) or file path.
pub fn resolve_species(name: &str) -> Result<SpeciesModel> {
    let key = name.trim_end_matches('+').to_ascii_lowercase();
    if let Some((_, text)) = BUILTIN.iter().find(|(k, _)| *k == key) {
        return parse_species(text).with_context(|| format!("built-in species {key}"));
    }
    let path = Path::new(name);
    if path.exists() {
        return load_species(path);
    }
    anyhow::bail!(
        "unknown species {name:?}; expected one of {} or a path to a species file",
        BUILTIN.map(|b| b.0).join(", ")
    )
}

pub fn builtin_species() -> Result<Vec<SpeciesModel>> {
    BUILTIN.iter().map(|(k, _)| resolve_species(k)).collect()
}
