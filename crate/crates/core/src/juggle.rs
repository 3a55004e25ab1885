//! The shot loop: pulse, detection window, latency, repeat.
//!
//! Each shot applies one excitation channel, evolves the ion under the repump
//! Lindbladian for the detection window while integrating the collectable
//! P1/2 → S1/2 photon flux, then evolves through the latency period without
//! counting photons. When the repump phases recur after a short cycle of shots,
//! the loop runs until states one cycle apart agree in trace distance for a
//! whole cycle; the remaining burn-in is then filled by repeating that cycle,
//! which reproduces further simulated shots to within the same tolerance.
//! Otherwise the stroboscopic state is quasi-periodic and the loop instead
//! waits for consecutive block averages of the photon probabilities to agree.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec::Vec;

use crate::dynamics::{steady_state_distance, DensityOperator, Lindbladian, PhasedHamiltonian, Tolerances};
use crate::error::{Error, Result};
use crate::excitation::{Handedness, PulseChannel, SpBlock};
use crate::linalg;
use crate::species::{SpeciesModel, GROUND_LABEL};

pub const DEFAULT_LATENCY: f64 = 100e-9;
pub const DEFAULT_ETA: f64 = 0.025;
pub const DEFAULT_BURN_IN: usize = 200;
pub const DEFAULT_MAX_SHOTS: usize = 1000;
pub const DEFAULT_STEADY_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_BEAT_CYCLE: usize = 200;
pub const DEFAULT_BLOCK_SHOTS: usize = 100;
pub const DEFAULT_BLOCK_TOL: f64 = 1e-3;

/// Order in which pulse handedness is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// Every shot flips handedness and every shot is a detection attempt.
    Alternating { start: Handedness },
    /// `prep` pulses of `start` handedness followed by one detecting pulse of
    /// the opposite handedness.
    Prepared { prep: usize, start: Handedness },
}

/// What a single slot in the schedule does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PulseSlot {
    pub handedness: Handedness,
    pub detect: bool,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::Alternating { start: Handedness::Right }
    }
}

impl Schedule {
    pub fn prepared(prep: usize) -> Self {
        if prep == 0 {
            Schedule::default()
        } else {
            Schedule::Prepared { prep, start: Handedness::Right }
        }
    }

    /// Number of shots after which the schedule repeats.
    pub fn period(&self) -> usize {
        match *self {
            Schedule::Alternating { .. } => 2,
            Schedule::Prepared { prep, .. } => prep + 1,
        }
    }

    pub fn slot(&self, shot: usize) -> PulseSlot {
        match *self {
            Schedule::Alternating { start } => PulseSlot {
                handedness: if shot % 2 == 0 { start } else { start.flip() },
                detect: true,
            },
            Schedule::Prepared { prep, start } => {
                if shot % (prep + 1) < prep {
                    PulseSlot { handedness: start, detect: false }
                } else {
                    PulseSlot { handedness: start.flip(), detect: true }
                }
            }
        }
    }

    /// Fraction of shots that are detection attempts.
    pub fn detect_fraction(&self) -> f64 {
        let p = self.period();
        (0..p).filter(|&k| self.slot(k).detect).count() as f64 / p as f64
    }

    pub fn with_start(self, start: Handedness) -> Self {
        match self {
            Schedule::Alternating { .. } => Schedule::Alternating { start },
            Schedule::Prepared { prep, .. } => Schedule::Prepared { prep, start },
        }
    }
}

/// Reference time for the repump beams' relative phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShotClock {
    /// Beam phases run continuously across shots, as for free-running lasers.
    #[default]
    Continuous,
    /// Beam phases restart at every pulse.
    PerShot,
}

/// Where the shot sequence starts.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Equal mixture of the S1/2 sublevels.
    GroundMixture,
    Custom(DensityOperator),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotConfig {
    /// Photon detection window, s.
    pub window: f64,
    /// Dead time after each window, s.
    pub latency: f64,
    /// Total photon detection efficiency.
    pub eta: f64,
    /// Standard deviation of the birefringent retardance.
    pub sigma_beta: f64,
    pub schedule: Schedule,
    pub burn_in_shots: usize,
    pub max_shots: usize,
    pub steady_tol: f64,
    /// Excitation pulse length; only lengthens the attempt period.
    pub pulse_duration: f64,
    pub initial: InitialState,
    /// Apply excitation pulses at all.
    pub excitation: bool,
    /// Keep the α-surviving cross terms in the pulse channel.
    pub cross_terms: bool,
    pub quadrature_nodes: usize,
    pub clock: ShotClock,
    /// Longest beat cycle, in shots, compared state by state. Longer or
    /// incommensurate cycles fall back to block averages.
    pub max_beat_cycle: usize,
    /// Minimum block length for the block-average test, shots.
    pub block_shots: usize,
    /// Relative agreement required between consecutive block averages.
    pub block_tol: f64,
    /// Store every shot's final state in its record.
    pub keep_states: bool,
    pub tolerances: Tolerances,
}

impl ShotConfig {
    pub fn new(window: f64) -> Self {
        ShotConfig {
            window,
            latency: DEFAULT_LATENCY,
            eta: DEFAULT_ETA,
            sigma_beta: 0.0,
            schedule: Schedule::default(),
            burn_in_shots: DEFAULT_BURN_IN,
            max_shots: DEFAULT_MAX_SHOTS,
            steady_tol: DEFAULT_STEADY_TOL,
            pulse_duration: 0.0,
            initial: InitialState::GroundMixture,
            excitation: true,
            cross_terms: false,
            quadrature_nodes: crate::excitation::DEFAULT_QUADRATURE_NODES,
            clock: ShotClock::default(),
            max_beat_cycle: DEFAULT_MAX_BEAT_CYCLE,
            block_shots: DEFAULT_BLOCK_SHOTS,
            block_tol: DEFAULT_BLOCK_TOL,
            keep_states: true,
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.window > 0.0) || !self.window.is_finite() {
            return Err(Error::Config(format!("window must be positive, got {}", self.window)));
        }
        if !(self.latency >= 0.0) || !self.latency.is_finite() {
            return Err(Error::Config(format!("latency must be non-negative, got {}", self.latency)));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::Config(format!("eta must lie in (0, 1], got {}", self.eta)));
        }
        if !(self.sigma_beta >= 0.0) || !self.sigma_beta.is_finite() {
            return Err(Error::Config(format!("sigma_beta must be non-negative, got {}", self.sigma_beta)));
        }
        if !(self.pulse_duration >= 0.0) {
            return Err(Error::Config("pulse_duration must be non-negative".into()));
        }
        if self.max_shots < self.burn_in_shots + self.schedule.period() {
            return Err(Error::Config(format!(
                "max_shots ({}) leaves no room after {} burn-in shots",
                self.max_shots, self.burn_in_shots
            )));
        }
        if !(self.steady_tol > 0.0) {
            return Err(Error::Config("steady_tol must be positive".into()));
        }
        if self.block_shots == 0 || !(self.block_tol > 0.0) {
            return Err(Error::Config("block_shots and block_tol must be positive".into()));
        }
        if self.quadrature_nodes == 0 {
            return Err(Error::Config("quadrature_nodes must be at least 1".into()));
        }
        Ok(())
    }

    /// Length of one shot, s.
    pub fn shot_period(&self) -> f64 {
        self.window + self.latency + self.pulse_duration
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotRecord {
    pub shot_index: usize,
    pub handedness: Handedness,
    pub detect: bool,
    /// Collectable emission probability from the intended P1/2 sublevel
    /// during this shot's window.
    pub p_r: f64,
    /// Same for the other P1/2 sublevel.
    pub p_w: f64,
    /// State at the end of the latency period, unless states are discarded.
    pub rho_after: Option<DensityOperator>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotRun {
    pub records: Vec<ShotRecord>,
    /// Shot from which the run has stayed settled, if any.
    pub settled_at: Option<usize>,
    /// Last settle measure: trace distance between states one cycle apart,
    /// or the relative change between block averages.
    pub final_distance: f64,
    pub burn_in_shots: usize,
    /// Shots after which both the schedule and the repump phases repeat, or
    /// the block length when they do not repeat within the configured limit.
    pub cycle: usize,
    /// Settled on block averages rather than on the state.
    pub quasi_periodic: bool,
    /// Worst trace drift over all evolutions.
    pub max_trace_drift: f64,
    /// Shots actually integrated; later records repeat the settled cycle.
    pub simulated_shots: usize,
}

impl ShotRun {
    pub fn converged(&self) -> bool {
        self.settled_at.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateStats {
    pub p_r: f64,
    pub p_w: f64,
    pub p_gamma: f64,
    /// Averages over shots whose pulse was right-handed / left-handed.
    pub p_r_by_handedness: [f64; 2],
    pub p_w_by_handedness: [f64; 2],
    /// Mean of per-shot fidelities, for comparison with the pooled value.
    pub mean_shot_fidelity: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegEstimate {
    /// Bell pairs per second.
    pub rate: f64,
    pub fidelity: f64,
    pub p_gamma: f64,
    pub p_r: f64,
    pub p_w: f64,
    pub shots_to_steady: usize,
    pub mean_shot_fidelity: f64,
}

/// `F = 1 − 2 p_r p_w / (p_r + p_w)²`.
pub fn fidelity(p_r: f64, p_w: f64) -> Result<f64> {
    let total = p_r + p_w;
    if !(total > 0.0) {
        return Err(Error::UndefinedFidelity);
    }
    Ok(1.0 - 2.0 * p_r * p_w / (total * total))
}

/// Heralding probability per attempt for two identical nodes, `½ (η p_γ)²`.
pub fn herald_probability(p_gamma: f64, eta: f64) -> f64 {
    0.5 * (eta * p_gamma).powi(2)
}

/// Bell pairs per second for one heralding chance every `window + latency`.
pub fn reg_rate(p_herald: f64, window: f64, latency: f64) -> f64 {
    p_herald / (window + latency)
}

/// Average detection-shot statistics over records with index `>= from`.
pub fn average_records(records: &[ShotRecord], from: usize) -> Result<SteadyStateStats> {
    let mut sum = [0.0f64; 2];
    let mut by_hand = [[0.0f64; 2]; 2];
    let mut count_hand = [0usize; 2];
    let mut fid_sum = 0.0;
    let mut fid_count = 0usize;
    let mut n = 0usize;
    for r in records.iter().filter(|r| r.shot_index >= from && r.detect) {
        sum[0] += r.p_r;
        sum[1] += r.p_w;
        let h = match r.handedness {
            Handedness::Right => 0,
            Handedness::Left => 1,
        };
        by_hand[h][0] += r.p_r;
        by_hand[h][1] += r.p_w;
        count_hand[h] += 1;
        if let Ok(f) = fidelity(r.p_r, r.p_w) {
            fid_sum += f;
            fid_count += 1;
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::Config(format!("no detection shots at or after shot {from}")));
    }
    let avg = |s: f64, c: usize| if c == 0 { f64::NAN } else { s / c as f64 };
    let p_r = sum[0] / n as f64;
    let p_w = sum[1] / n as f64;
    Ok(SteadyStateStats {
        p_r,
        p_w,
        p_gamma: p_r + p_w,
        p_r_by_handedness: [avg(by_hand[0][0], count_hand[0]), avg(by_hand[1][0], count_hand[1])],
        p_w_by_handedness: [avg(by_hand[0][1], count_hand[0]), avg(by_hand[1][1], count_hand[1])],
        mean_shot_fidelity: avg(fid_sum, fid_count),
        samples: n,
    })
}

/// Steady-state averages of a converged run.
///
/// Shots before the burn-in, and before the run settled, are excluded, and
/// the average covers a whole number of cycles ending at the last shot.
pub fn steady_state_stats(run: &ShotRun) -> Result<SteadyStateStats> {
    let settled = run.settled_at.ok_or(Error::NotConverged {
        shots: run.records.len(),
        distance: run.final_distance,
    })?;
    let n = run.records.len();
    let earliest = run.burn_in_shots.max((settled + 1).saturating_sub(run.cycle)).min(n);
    let whole = (n - earliest) / run.cycle.max(1) * run.cycle.max(1);
    let from = if whole == 0 { earliest } else { n - whole };
    average_records(&run.records, from)
}

/// Smallest number of shots after which every repump phase returns to its
/// starting value, or `None` if there is none up to `max_cycle`.
pub fn beat_cycle(hamiltonian: &PhasedHamiltonian, shot_period: f64, max_cycle: usize) -> Option<usize> {
    let mut freqs: Vec<f64> = Vec::new();
    for term in hamiltonian.terms() {
        let f = (term.detuning / (2.0 * core::f64::consts::PI)).abs();
        if f > 0.0 && !freqs.iter().any(|g| (g - f).abs() <= 1e-9 * f) {
            freqs.push(f);
        }
    }
    (1..=max_cycle.max(1)).find(|&q| {
        freqs.iter().all(|f| {
            let turns = f * shot_period * q as f64;
            (turns - turns.round()).abs() < 1e-9 * turns.max(1.0)
        })
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Precomputed simulation context for one species and configuration.
#[derive(Debug, Clone)]
pub struct Juggler<'a> {
    model: &'a SpeciesModel,
    config: ShotConfig,
    lindbladian: Lindbladian,
    block: SpBlock,
    right_channel: PulseChannel,
    left_channel: PulseChannel,
    /// Collectable channel indices emitting from P1/2(m=+1/2) and P1/2(m=−1/2).
    from_p_plus: Vec<usize>,
    from_p_minus: Vec<usize>,
    beat_cycle: Option<usize>,
}

impl<'a> Juggler<'a> {
    pub fn new(model: &'a SpeciesModel, config: ShotConfig) -> Result<Self> {
        config.validate()?;
        let block = SpBlock::from_model(model)?;
        let channels = model.collapse_operators();
        let mut from_p_plus = Vec::new();
        let mut from_p_minus = Vec::new();
        for (k, c) in channels.iter().enumerate() {
            if !c.collectable {
                continue;
            }
            if c.upper == block.p_plus {
                from_p_plus.push(k);
            } else if c.upper == block.p_minus {
                from_p_minus.push(k);
            }
        }
        let hamiltonian = model.repump_hamiltonian();
        let beat_cycle = match config.clock {
            ShotClock::PerShot => Some(1),
            ShotClock::Continuous => beat_cycle(&hamiltonian, config.shot_period(), config.max_beat_cycle),
        };
        let lindbladian =
            Lindbladian::new(hamiltonian, channels.into_iter().map(|c| c.operator).collect())?;
        let make = |h| {
            PulseChannel::with_nodes(h, config.sigma_beta, config.quadrature_nodes)
                .with_cross_terms(config.cross_terms)
        };
        Ok(Juggler {
            model,
            right_channel: make(Handedness::Right),
            left_channel: make(Handedness::Left),
            config,
            lindbladian,
            block,
            from_p_plus,
            from_p_minus,
            beat_cycle,
        })
    }

    /// Shots after which the repump phases repeat, if within the limit.
    pub fn beat_cycle(&self) -> Option<usize> {
        self.beat_cycle
    }

    /// Shots after which both schedule and repump phases repeat; without a
    /// beat cycle, the block length of the block-average test.
    pub fn cycle(&self) -> usize {
        let p = self.config.schedule.period();
        match self.beat_cycle {
            Some(q) => p / gcd(p, q) * q,
            None => self.config.block_shots.div_ceil(p) * p,
        }
    }

    pub fn config(&self) -> &ShotConfig {
        &self.config
    }

    pub fn block(&self) -> &SpBlock {
        &self.block
    }

    pub fn lindbladian(&self) -> &Lindbladian {
        &self.lindbladian
    }

    pub fn initial_state(&self) -> DensityOperator {
        match &self.config.initial {
            InitialState::Custom(rho) => rho.clone(),
            InitialState::GroundMixture => {
                let s = self.model.manifold_index(GROUND_LABEL).expect("validated model");
                let levels: Vec<usize> = self.model.sublevels(s).collect();
                DensityOperator::mixture_of(self.model.dim(), &levels)
            }
        }
    }

    fn channel(&self, h: Handedness) -> &PulseChannel {
        match h {
            Handedness::Right => &self.right_channel,
            Handedness::Left => &self.left_channel,
        }
    }

    /// Trace distance with cheap Frobenius bounds before falling back to a
    /// full eigendecomposition.
    fn settle_check(&self, a: &DensityOperator, b: &DensityOperator) -> Result<(bool, f64)> {
        let tol = self.config.steady_tol;
        let frob = (a.matrix() - b.matrix()).norm();
        if 0.5 * frob >= tol {
            return Ok((false, 0.5 * frob));
        }
        if 0.5 * (a.dim() as f64).sqrt() * frob < tol {
            return Ok((true, 0.5 * frob));
        }
        let d = steady_state_distance(a, b)?;
        Ok((d < tol, d))
    }

    /// One shot: pulse, window with photon counting, latency.
    pub fn shot(&self, rho: &DensityOperator, index: usize) -> Result<ShotRecord> {
        let slot = self.config.schedule.slot(index);
        let excited = if self.config.excitation {
            DensityOperator::from_matrix(self.channel(slot.handedness).apply(&self.block, rho.matrix()))?
        } else {
            rho.clone()
        };
        let tol = &self.config.tolerances;
        let t0 = match self.config.clock {
            ShotClock::Continuous => {
                let phase_index = self.beat_cycle.map_or(index, |q| index % q);
                phase_index as f64 * self.config.shot_period() + self.config.pulse_duration
            }
            ShotClock::PerShot => 0.0,
        };
        let window = self.lindbladian.evolve(&excited, t0, self.config.window, tol)?;
        let from_plus = window.fluxes.sum_where(|k| self.from_p_plus.contains(&k));
        let from_minus = window.fluxes.sum_where(|k| self.from_p_minus.contains(&k));
        let (p_r, p_w) = match slot.handedness {
            Handedness::Right => (from_plus, from_minus),
            Handedness::Left => (from_minus, from_plus),
        };
        let after = if self.config.latency > 0.0 {
            self.lindbladian
                .evolve(&window.final_state, t0 + self.config.window, self.config.latency, tol)?
                .final_state
        } else {
            window.final_state
        };
        Ok(ShotRecord {
            shot_index: index,
            handedness: slot.handedness,
            detect: slot.detect,
            p_r: p_r.max(0.0),
            p_w: p_w.max(0.0),
            rho_after: Some(after),
        })
    }

    /// Run shots until steady state or `max_shots`.
    ///
    /// The run has settled once every state matches the state one cycle
    /// earlier, and it stops once at least one full cycle follows the burn-in.
    pub fn run_shots(&self) -> Result<ShotRun> {
        if self.beat_cycle.is_none() {
            return self.run_blocks();
        }
        let cycle = self.cycle();
        let mut rho = self.initial_state();
        let mut records: Vec<ShotRecord> = Vec::new();
        let mut recent: VecDeque<DensityOperator> = VecDeque::with_capacity(cycle + 1);
        let mut settled_at = None;
        let mut final_distance = f64::INFINITY;
        let mut drift = 0.0f64;

        for k in 0..self.config.max_shots {
            let mut record = self.shot(&rho, k)?;
            rho = record.rho_after.take().expect("shot always returns a state");
            drift = drift.max((rho.trace() - 1.0).abs());
            if recent.len() == cycle {
                let earlier = recent.pop_front().expect("non-empty");
                let (same, d) = self.settle_check(&rho, &earlier)?;
                final_distance = d;
                match (same, settled_at) {
                    (true, None) => settled_at = Some(k),
                    (false, _) => settled_at = None,
                    _ => {}
                }
            }
            recent.push_back(rho.clone());
            if self.config.keep_states {
                record.rho_after = Some(rho.clone());
            }
            records.push(record);
            if settled_at.is_some_and(|s| k + 1 >= s + cycle) {
                break;
            }
        }
        let simulated_shots = records.len();
        // a settle that has not yet held for a whole cycle does not count
        let settled_at = settled_at.filter(|&s| simulated_shots >= s + cycle);
        if settled_at.is_some() {
            let start = simulated_shots - cycle;
            let target = simulated_shots.max(self.config.burn_in_shots + cycle);
            for k in simulated_shots..target {
                let mut r = records[start + (k - start) % cycle].clone();
                r.shot_index = k;
                records.push(r);
            }
        }
        Ok(ShotRun {
            records,
            settled_at,
            final_distance,
            burn_in_shots: self.config.burn_in_shots,
            cycle,
            quasi_periodic: false,
            max_trace_drift: drift,
            simulated_shots,
        })
    }

    /// Shot loop for quasi-periodic repump phases: settled once consecutive
    /// block averages of `p_r` and `p_w` agree to `block_tol`.
    fn run_blocks(&self) -> Result<ShotRun> {
        let block = self.cycle();
        let tol = self.config.block_tol;
        let mut rho = self.initial_state();
        let mut records: Vec<ShotRecord> = Vec::new();
        let mut previous: Option<(f64, f64)> = None;
        let mut settled_at = None;
        let mut final_distance = f64::INFINITY;
        let mut drift = 0.0f64;

        for k in 0..self.config.max_shots {
            let mut record = self.shot(&rho, k)?;
            rho = record.rho_after.take().expect("shot always returns a state");
            drift = drift.max((rho.trace() - 1.0).abs());
            if self.config.keep_states {
                record.rho_after = Some(rho.clone());
            }
            records.push(record);
            if (k + 1) % block != 0 {
                continue;
            }
            let stats = average_records(&records, k + 1 - block)?;
            let current = (stats.p_r, stats.p_w);
            if let Some((p_r, p_w)) = previous {
                let rel = |a: f64, b: f64| {
                    let scale = a.abs().max(b.abs());
                    if scale == 0.0 { 0.0 } else { (a - b).abs() / scale }
                };
                final_distance = rel(p_r, current.0).max(rel(p_w, current.1));
                match (final_distance < tol, settled_at) {
                    (true, None) => settled_at = Some(k),
                    (false, _) => settled_at = None,
                    _ => {}
                }
            }
            previous = Some(current);
            if settled_at.is_some() && records.len() >= self.config.burn_in_shots + block {
                break;
            }
        }
        let simulated_shots = records.len();
        Ok(ShotRun {
            records,
            settled_at,
            final_distance,
            burn_in_shots: self.config.burn_in_shots,
            cycle: block,
            quasi_periodic: true,
            max_trace_drift: drift,
            simulated_shots,
        })
    }

    /// Rate and fidelity from a converged run.
    pub fn estimate_from(&self, run: &ShotRun) -> Result<RegEstimate> {
        let stats = steady_state_stats(run)?;
        let fid = fidelity(stats.p_r, stats.p_w)?;
        let herald = herald_probability(stats.p_gamma, self.config.eta);
        let rate = reg_rate(herald, self.config.window, self.config.latency + self.config.pulse_duration)
            * self.config.schedule.detect_fraction();
        Ok(RegEstimate {
            rate,
            fidelity: fid,
            p_gamma: stats.p_gamma,
            p_r: stats.p_r,
            p_w: stats.p_w,
            shots_to_steady: run.settled_at.map_or(run.records.len(), |k| k + 1),
            mean_shot_fidelity: stats.mean_shot_fidelity,
        })
    }

    pub fn estimate(&self) -> Result<RegEstimate> {
        let run = self.run_shots()?;
        self.estimate_from(&run)
    }
}

/// Run the shot loop for `model` under `config`.
pub fn run_shots(model: &SpeciesModel, config: &ShotConfig) -> Result<ShotRun> {
    Juggler::new(model, config.clone())?.run_shots()
}

/// Steady-state rate and fidelity for `model` under `config`.
pub fn estimate(model: &SpeciesModel, config: &ShotConfig) -> Result<RegEstimate> {
    Juggler::new(model, config.clone())?.estimate()
}

/// Largest trace drift and Hermiticity error over a run's recorded states.
pub fn run_health(run: &ShotRun) -> (f64, f64) {
    run.records.iter().filter_map(|r| r.rho_after.as_ref()).fold((0.0f64, 0.0f64), |(t, h), rho| {
        (t.max((rho.trace() - 1.0).abs()), h.max(linalg::hermiticity_error(rho.matrix())))
    })
}
