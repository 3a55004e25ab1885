//! Detection-window sweeps and the constrained rate maximum.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::juggle::{average_records, Juggler, Schedule, ShotConfig, DEFAULT_BURN_IN, DEFAULT_ETA};
use crate::species::SpeciesModel;

/// Fidelity floor used for the headline rates.
pub const TABLE_FIDELITY: f64 = 0.97;
/// Simulated time granted to each point for reaching steady state, s.
pub const DEFAULT_SETTLE_TIME: f64 = 20e-6;
/// Significant digits kept when snapping grid windows.
pub const GRID_DIGITS: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Ideal,
    Realistic,
    Custom,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Ideal => "ideal",
            ScenarioKind::Realistic => "realistic",
            ScenarioKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for WindowGrid {
    fn default() -> Self {
        WindowGrid { min: 1e-9, max: 200e-9, count: 40, spacing: Spacing::Log }
    }
}

/// Round `x` to `digits` significant digits.
///
/// Grid windows are snapped so that attempt periods are short decimal
/// multiples of a nanosecond, which keeps the repump beat cycle finite.
pub fn snap(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let exp = x.abs().log10().floor() as i32 - (digits - 1);
    // scale by an exact power of ten on the larger side to limit rounding
    if exp < 0 {
        let s = 10f64.powi(-exp);
        (x * s).round() / s
    } else {
        let s = 10f64.powi(exp);
        (x / s).round() * s
    }
}

impl WindowGrid {
    /// Grid windows, snapped and deduplicated.
    pub fn windows(&self) -> Result<Vec<f64>> {
        if self.count == 0 {
            return Ok(Vec::new());
        }
        if !(self.min > 0.0) || !(self.max >= self.min) {
            return Err(Error::Config(format!(
                "window grid needs 0 < min <= max, got [{:e}, {:e}]",
                self.min, self.max
            )));
        }
        let n = self.count;
        let raw = (0..n).map(|k| {
            let f = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
            match self.spacing {
                Spacing::Linear => self.min + f * (self.max - self.min),
                Spacing::Log => self.min * (self.max / self.min).powf(f),
            }
        });
        let mut out: Vec<f64> = Vec::with_capacity(n);
        for w in raw.map(|w| snap(w, GRID_DIGITS)) {
            if out.last().is_none_or(|&last| w > last) {
                out.push(w);
            }
        }
        Ok(out)
    }
}

/// One parameter set swept over detection windows.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub kind: ScenarioKind,
    pub latency: f64,
    pub sigma_beta: f64,
    pub eta: f64,
    /// Number of same-handedness preparation pulses before each detecting
    /// pulse; zero means strict alternation.
    pub prep_pulses: usize,
    pub window_grid: Vec<f64>,
    pub burn_in_shots: usize,
    /// Lower bound on the shot budget; raised for short attempt periods.
    pub max_shots: usize,
    pub steady_tol: f64,
    pub settle_time: f64,
}

impl Scenario {
    fn base(label: &str, kind: ScenarioKind, latency: f64, sigma_beta: f64) -> Self {
        Scenario {
            label: label.to_string(),
            kind,
            latency,
            sigma_beta,
            eta: DEFAULT_ETA,
            prep_pulses: 0,
            window_grid: WindowGrid::default().windows().expect("default grid is valid"),
            burn_in_shots: DEFAULT_BURN_IN,
            max_shots: crate::juggle::DEFAULT_MAX_SHOTS,
            steady_tol: crate::juggle::DEFAULT_STEADY_TOL,
            settle_time: DEFAULT_SETTLE_TIME,
        }
    }

    /// No latency and pure circular polarization.
    pub fn ideal() -> Self {
        Self::base("ideal", ScenarioKind::Ideal, 0.0, 0.0)
    }

    /// 100 ns latency and birefringent polarization impurity.
    pub fn realistic() -> Self {
        Self::base("realistic", ScenarioKind::Realistic, 100e-9, 0.02f64.sqrt())
    }

    pub fn custom(label: &str) -> Self {
        Self::base(label, ScenarioKind::Custom, 100e-9, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_grid.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::Config(format!("scenario {}: windows must be positive", self.label)));
        }
        if self.window_grid.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::Config(format!(
                "scenario {}: window grid must be strictly increasing",
                self.label
            )));
        }
        if !(self.settle_time >= 0.0) {
            return Err(Error::Config(format!("scenario {}: settle_time must be non-negative", self.label)));
        }
        self.shot_config(self.window_grid.first().copied().unwrap_or(1e-9)).validate()
    }

    /// Shot configuration for one grid point.
    pub fn shot_config(&self, window: f64) -> ShotConfig {
        let mut cfg = ShotConfig::new(window);
        cfg.latency = self.latency;
        cfg.sigma_beta = self.sigma_beta;
        cfg.eta = self.eta;
        cfg.schedule = Schedule::prepared(self.prep_pulses);
        cfg.burn_in_shots = self.burn_in_shots;
        cfg.steady_tol = self.steady_tol;
        cfg.keep_states = false;
        let budget = (self.settle_time / cfg.shot_period()).ceil() as usize;
        cfg.max_shots = self.max_shots.max(self.burn_in_shots + budget);
        cfg
    }
}

/// Result for one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub window: f64,
    pub rate: f64,
    pub fidelity: f64,
    pub p_r: f64,
    pub p_w: f64,
    /// `None` when the point did not reach steady state.
    pub shots_to_steady: Option<usize>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn converged(&self) -> bool {
        self.shots_to_steady.is_some() && self.error.is_none()
    }

    fn failed(window: f64, error: String) -> Self {
        SweepRow {
            window,
            rate: f64::NAN,
            fidelity: f64::NAN,
            p_r: f64::NAN,
            p_w: f64::NAN,
            shots_to_steady: None,
            error: Some(error),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub species: String,
    pub scenario: String,
    pub rows: Vec<SweepRow>,
}

/// Simulate one window of a scenario. Failures are reported in the row.
pub fn run_point(model: &SpeciesModel, scenario: &Scenario, window: f64) -> SweepRow {
    let cfg = scenario.shot_config(window);
    let juggler = match Juggler::new(model, cfg) {
        Ok(j) => j,
        Err(e) => return SweepRow::failed(window, e.to_string()),
    };
    let run = match juggler.run_shots() {
        Ok(r) => r,
        Err(e) => return SweepRow::failed(window, e.to_string()),
    };
    match juggler.estimate_from(&run) {
        Ok(est) => SweepRow {
            window,
            rate: est.rate,
            fidelity: est.fidelity,
            p_r: est.p_r,
            p_w: est.p_w,
            shots_to_steady: Some(est.shots_to_steady),
            error: None,
        },
        Err(Error::NotConverged { shots, distance }) => {
            // best effort: averages over the last cycle, flagged as unconverged
            let from = run.records.len().saturating_sub(run.cycle);
            let mut row = SweepRow::failed(
                window,
                format!("no steady state after {shots} shots (distance {distance:e})"),
            );
            if let Ok(stats) = average_records(&run.records, from) {
                row.p_r = stats.p_r;
                row.p_w = stats.p_w;
                row.fidelity = crate::juggle::fidelity(stats.p_r, stats.p_w).unwrap_or(f64::NAN);
                let cfg = juggler.config();
                row.rate = crate::juggle::reg_rate(
                    crate::juggle::herald_probability(stats.p_gamma, cfg.eta),
                    cfg.window,
                    cfg.latency + cfg.pulse_duration,
                ) * cfg.schedule.detect_fraction();
            }
            row
        }
        Err(e) => SweepRow::failed(window, e.to_string()),
    }
}

/// Sequential sweep over the scenario's grid.
pub fn run_sweep(model: &SpeciesModel, scenario: &Scenario) -> Result<SweepResult> {
    scenario.validate()?;
    Ok(SweepResult {
        species: model.name().to_string(),
        scenario: scenario.label.clone(),
        rows: scenario.window_grid.iter().map(|&w| run_point(model, scenario, w)).collect(),
    })
}

/// Outcome of the constrained maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Optimum {
    Feasible { window: f64, rate: f64, fidelity: f64 },
    NoFeasible,
}

impl Optimum {
    pub fn rate(&self) -> Option<f64> {
        match self {
            Optimum::Feasible { rate, .. } => Some(*rate),
            Optimum::NoFeasible => None,
        }
    }
}

/// Highest-rate converged row with fidelity at least `f_min`; ties go to the
/// smaller window.
pub fn max_rate_at_fidelity(result: &SweepResult, f_min: f64) -> Optimum {
    let mut best: Option<&SweepRow> = None;
    for row in result.rows.iter().filter(|r| r.converged() && r.fidelity >= f_min) {
        best = match best {
            Some(b) if b.rate > row.rate || (b.rate == row.rate && b.window <= row.window) => Some(b),
            _ => Some(row),
        };
    }
    best.map_or(Optimum::NoFeasible, |r| Optimum::Feasible {
        window: r.window,
        rate: r.rate,
        fidelity: r.fidelity,
    })
}
