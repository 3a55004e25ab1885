//! TOML sweep configuration.
//!
//! ```toml
//! species = ["mg", "ca"]        # built-in keys or species file paths
//!
//! [[scenario]]
//! label = "realistic"
//! base = "realistic"            # ideal | realistic | custom
//! eta = 0.025
//! latency_s = 100e-9
//! sigma_beta = 0.1414
//! prep_pulses = 0
//! grid = { min_s = 1e-9, max_s = 200e-9, count = 40, spacing = "log" }
//! ```
//!
//! Every key except `label` is optional; missing keys fall back to the base
//! scenario. With no `[[scenario]]` blocks the ideal and realistic defaults
//! are used.

use std::path::Path;

use anyhow::{bail, Context, Result};
use juggler_core::sweep::{Scenario, ScenarioKind, Spacing, WindowGrid};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SpacingSpec {
    Linear,
    Log,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min_s: f64,
    pub max_s: f64,
    pub count: usize,
    #[serde(default = "default_spacing")]
    pub spacing: SpacingSpec,
}

fn default_spacing() -> SpacingSpec {
    SpacingSpec::Log
}

impl GridSpec {
    pub fn to_grid(&self) -> WindowGrid {
        WindowGrid {
            min: self.min_s,
            max: self.max_s,
            count: self.count,
            spacing: match self.spacing {
                SpacingSpec::Linear => Spacing::Linear,
                SpacingSpec::Log => Spacing::Log,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BaseSpec {
    Ideal,
    Realistic,
    Custom,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub label: String,
    pub base: Option<BaseSpec>,
    pub eta: Option<f64>,
    pub latency_s: Option<f64>,
    pub sigma_beta: Option<f64>,
    pub prep_pulses: Option<usize>,
    pub burn_in_shots: Option<usize>,
    pub max_shots: Option<usize>,
    pub steady_tol: Option<f64>,
    pub settle_time_s: Option<f64>,
    pub grid: Option<GridSpec>,
    /// Explicit windows, used instead of `grid`.
    pub windows_s: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub species: Vec<String>,
    #[serde(default)]
    pub scenario: Vec<ScenarioSpec>,
}

impl ScenarioSpec {
    pub fn to_scenario(&self) -> Result<Scenario> {
        let base = self.base.unwrap_or(match self.label.as_str() {
            "ideal" => BaseSpec::Ideal,
            "realistic" => BaseSpec::Realistic,
            _ => BaseSpec::Custom,
        });
        let mut s = match base {
            BaseSpec::Ideal => Scenario::ideal(),
            BaseSpec::Realistic => Scenario::realistic(),
            BaseSpec::Custom => Scenario::custom(&self.label),
        };
        s.label = self.label.clone();
        if base != BaseSpec::Custom && self.has_overrides() {
            s.kind = ScenarioKind::Custom;
        }
        if let Some(v) = self.eta {
            s.eta = v;
        }
        if let Some(v) = self.latency_s {
            s.latency = v;
        }
        if let Some(v) = self.sigma_beta {
            s.sigma_beta = v;
        }
        if let Some(v) = self.prep_pulses {
            s.prep_pulses = v;
        }
        if let Some(v) = self.burn_in_shots {
            s.burn_in_shots = v;
        }
        if let Some(v) = self.max_shots {
            s.max_shots = v;
        }
        if let Some(v) = self.steady_tol {
            s.steady_tol = v;
        }
        if let Some(v) = self.settle_time_s {
            s.settle_time = v;
        }
        match (&self.grid, &self.windows_s) {
            (Some(_), Some(_)) => bail!("scenario {}: give either grid or windows_s, not both", self.label),
            (Some(g), None) => {
                s.window_grid = g
                    .to_grid()
                    .windows()
                    .with_context(|| format!("scenario {}: grid", self.label))?
            }
            (None, Some(w)) => s.window_grid = w.clone(),
            (None, None) => {}
        }
        s.validate().with_context(|| format!("scenario {}", self.label))?;
        Ok(s)
    }

    fn has_overrides(&self) -> bool {
        self.eta.is_some()
            || self.latency_s.is_some()
            || self.sigma_beta.is_some()
            || self.prep_pulses.is_some()
    }
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).context("malformed sweep config")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn scenarios(&self) -> Result<Vec<Scenario>> {
        if self.scenario.is_empty() {
            return Ok(vec![Scenario::ideal(), Scenario::realistic()]);
        }
        self.scenario.iter().map(ScenarioSpec::to_scenario).collect()
    }
}
