//! The acceptance suite: one verdict per criterion, shared by the `check`
//! subcommand and the acceptance test target.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use juggler_core::angular::{wigner3j, HalfInt};
use juggler_core::excitation::{Handedness, PulseChannel, SpBlock};
use juggler_core::juggle::{Juggler, ShotConfig};
use juggler_core::linalg::{hermitian_eigenvalues, trace, CMatrix, ONE};
use juggler_core::species::EXCITED_LABEL;
use juggler_core::sweep::{run_point, snap, Optimum, Scenario, Spacing, WindowGrid, GRID_DIGITS};
use juggler_core::{
    CollapseOperator, DensityOperator, Lindbladian, PhasedHamiltonian, SpeciesModel, SweepResult,
    SweepRow, Tolerances,
};

use crate::output::to_csv;
use crate::run::run_sweeps;
use crate::species_file::builtin_species;
use crate::table::{default_table, TableRow};

pub const TRACE_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = -1e-8;
pub const HERMITICITY_TOL: f64 = 1e-10;
pub const ANALYTIC_TOL: f64 = 1e-6;
pub const THREE_J_TOL: f64 = 1e-12;
pub const CHANNEL_TRACE_TOL: f64 = 1e-10;
pub const CHOI_TOL: f64 = -1e-9;

pub const BAD_EXCITATION: f64 = 0.01234;
pub const BAD_EXCITATION_TOL: f64 = 0.0005;
pub const SLOPE_TOL: f64 = 0.1;

pub const LIMIT_LOW_FIDELITY: f64 = 0.5;
pub const LIMIT_LOW_TOL: f64 = 0.02;
pub const LIMIT_HIGH_FIDELITY: f64 = 0.999;
pub const LIMIT_RUNTIME: Duration = Duration::from_secs(60);

pub const PLATEAU: (f64, f64) = (0.979, 0.991);
pub const RATE_TOLERANCE: f64 = 0.25;
pub const IDEAL_FLOOR: f64 = 1000.0;
pub const IDEAL_FLOOR_BA: f64 = 750.0;
pub const RECORD: f64 = 250.0;
/// Relative rate change treated as a real turn in a curve rather than noise.
pub const SHAPE_TOL: f64 = 1e-3;
pub const TABLE_BUDGET: Duration = Duration::from_secs(600);
pub const SPEEDUP_WORKERS: usize = 4;
pub const SPEEDUP_GRID: usize = 32;
pub const MIN_SPEEDUP: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub criterion: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(criterion: u8, title: &'static str, pass: bool, detail: String) -> Self {
        Verdict { criterion, title, pass, detail }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "criterion {} {tag} {}: {}", self.criterion, self.title, self.detail)
    }
}

/// Ideal and realistic sweeps of every built-in species, with timing.
#[derive(Debug, Clone)]
pub struct TableRun {
    pub models: Vec<SpeciesModel>,
    pub results: Vec<SweepResult>,
    pub table: Vec<TableRow>,
    pub elapsed: Duration,
    pub workers: usize,
}

pub fn table_run(workers: usize) -> Result<TableRun> {
    let models = builtin_species()?;
    let scenarios = [Scenario::ideal(), Scenario::realistic()];
    let start = Instant::now();
    let results = run_sweeps(&models, &scenarios, workers)?;
    let elapsed = start.elapsed();
    let table = default_table(&results);
    Ok(TableRun { models, results, table, elapsed, workers })
}

fn p1_2_lifetime(model: &SpeciesModel) -> Result<f64> {
    model
        .manifold_index(EXCITED_LABEL)
        .and_then(|m| model.lifetime(m))
        .with_context(|| format!("{} has no decaying {EXCITED_LABEL}", model.name()))
}

fn worst(a: f64, b: f64) -> f64 {
    if b.is_nan() {
        b
    } else {
        a.max(b)
    }
}

// ---- 1: physics kernel ----------------------------------------------------

struct KernelFigures {
    trace_drift: f64,
    hermiticity: f64,
    min_eigenvalue: f64,
}

/// Pulse and repump every built-in species for `shots` shots with positivity
/// monitoring on.
fn species_evolution(model: &SpeciesModel, shots: usize) -> Result<KernelFigures> {
    let mut cfg = ShotConfig::new(30e-9);
    cfg.sigma_beta = 0.02f64.sqrt();
    let juggler = Juggler::new(model, cfg.clone())?;
    let tol = Tolerances { monitor_positivity: true, ..cfg.tolerances };
    let channels = [
        PulseChannel::new(Handedness::Right, cfg.sigma_beta),
        PulseChannel::new(Handedness::Left, cfg.sigma_beta),
    ];
    let mut rho = juggler.initial_state();
    let mut figs = KernelFigures { trace_drift: 0.0, hermiticity: 0.0, min_eigenvalue: 0.0 };
    for k in 0..shots {
        let pulsed = channels[k % 2].apply(juggler.block(), rho.matrix());
        let pulsed = DensityOperator::from_matrix(pulsed)?;
        let d = pulsed.check();
        figs.trace_drift = worst(figs.trace_drift, d.trace_error);
        figs.hermiticity = worst(figs.hermiticity, d.hermiticity_error);
        figs.min_eigenvalue = figs.min_eigenvalue.min(d.min_eigenvalue);
        let t0 = k as f64 * cfg.shot_period();
        let r = juggler.lindbladian().evolve(&pulsed, t0, cfg.shot_period(), &tol)?;
        figs.trace_drift = worst(figs.trace_drift, r.max_trace_drift);
        figs.hermiticity = worst(figs.hermiticity, r.max_hermiticity_error);
        figs.min_eigenvalue = figs.min_eigenvalue.min(r.min_eigenvalue.unwrap_or(f64::NAN));
        rho = r.final_state;
    }
    Ok(figs)
}

/// Largest error of a two-level decay against `exp(-γt)`, and of the
/// integrated flux against the population lost.
pub fn two_level_errors() -> Result<(f64, f64)> {
    let gamma: f64 = 1.4e8;
    let l = Lindbladian::new(
        PhasedHamiltonian::new(2),
        vec![CollapseOperator::transition(0, 1, gamma.sqrt())],
    )?;
    let rho0 = DensityOperator::basis_state(2, 1);
    let mut decay = 0.0f64;
    let mut flux = 0.0f64;
    for gt in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let r = l.evolve(&rho0, 0.0, gt / gamma, &Tolerances::default())?;
        let pe = r.final_state.population(1);
        decay = decay.max((pe - (-gt).exp()).abs());
        flux = flux.max((r.fluxes.total() - (1.0 - pe)).abs());
    }
    Ok((decay, flux))
}

/// Flux against lost excited population for a full species with no drive.
pub fn species_flux_error(model: &SpeciesModel) -> Result<f64> {
    let excited: Vec<usize> = model
        .manifolds()
        .iter()
        .enumerate()
        .filter(|(m, _)| model.lifetime(*m).is_some())
        .flat_map(|(m, _)| model.sublevels(m))
        .collect();
    let l = Lindbladian::new(
        PhasedHamiltonian::new(model.dim()),
        model.collapse_operators().into_iter().map(|c| c.operator).collect(),
    )?;
    let rho0 = DensityOperator::mixture_of(model.dim(), &excited);
    let r = l.evolve(&rho0, 0.0, 50e-9, &Tolerances::default())?;
    let left: f64 = excited.iter().map(|&k| r.final_state.population(k)).sum();
    Ok((r.fluxes.total() - (1.0 - left)).abs())
}

fn three_j(j: [i32; 3], m: [i32; 3]) -> f64 {
    let h = HalfInt::from_twice;
    wigner3j(h(j[0]), h(j[1]), h(j[2]), h(m[0]), h(m[1]), h(m[2])).expect("valid projections")
}

fn projections(twice_j: i32) -> impl Iterator<Item = i32> {
    (0..=twice_j).map(move |k| 2 * k - twice_j)
}

/// Worst orthogonality and symmetry violation for all `j1, j2 <= jmax`.
pub fn three_j_errors(twice_jmax: i32) -> (f64, f64) {
    let mut ortho = 0.0f64;
    let mut sym = 0.0f64;
    for a in 0..=twice_jmax {
        for b in 0..=twice_jmax {
            let j3s: Vec<i32> = ((a - b).abs()..=a + b).step_by(2).collect();
            for &c in &j3s {
                for m3 in projections(c) {
                    for &c2 in &j3s {
                        if projections(c2).all(|m| m != m3) {
                            continue;
                        }
                        let mut s = 0.0;
                        for m1 in projections(a) {
                            let m2 = -m3 - m1;
                            if m2.abs() > b {
                                continue;
                            }
                            s += three_j([a, b, c], [m1, m2, m3]) * three_j([a, b, c2], [m1, m2, m3]);
                        }
                        let expect = if c == c2 { 1.0 / f64::from(c + 1) } else { 0.0 };
                        ortho = ortho.max((s - expect).abs() * f64::from(c + 1));
                    }
                    for m1 in projections(a) {
                        let m2 = -m3 - m1;
                        if m2.abs() > b {
                            continue;
                        }
                        let w = three_j([a, b, c], [m1, m2, m3]);
                        let odd = if ((a + b + c) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                        sym = sym
                            .max((three_j([b, c, a], [m2, m3, m1]) - w).abs())
                            .max((three_j([b, a, c], [m2, m1, m3]) - odd * w).abs())
                            .max((three_j([a, b, c], [-m1, -m2, -m3]) - odd * w).abs());
                    }
                }
            }
        }
    }
    (ortho, sym)
}

/// Worst trace defect over unit inputs and smallest Choi eigenvalue.
pub fn channel_errors(block: &SpBlock, channel: &PulseChannel) -> (f64, f64) {
    let mut trace_err = 0.0f64;
    for i in 0..block.dim {
        for j in 0..block.dim {
            let mut unit = CMatrix::zeros(block.dim, block.dim);
            unit[(i, j)] = ONE;
            let image = channel.apply(block, &unit);
            let expect = if i == j { 1.0 } else { 0.0 };
            trace_err = trace_err.max((trace(&image) - expect).norm());
        }
    }
    let choi = channel.choi_matrix(block);
    (trace_err, hermitian_eigenvalues(&choi)[0])
}

pub fn kernel() -> Result<Verdict> {
    let models = builtin_species()?;
    let mut drift = 0.0f64;
    let mut herm = 0.0f64;
    let mut min_eig = 0.0f64;
    let mut flux_species = 0.0f64;
    for m in &models {
        let f = species_evolution(m, 40)?;
        drift = worst(drift, f.trace_drift);
        herm = worst(herm, f.hermiticity);
        min_eig = min_eig.min(f.min_eigenvalue);
        flux_species = worst(flux_species, species_flux_error(m)?);
    }
    let (decay, flux_two) = two_level_errors()?;
    let (ortho, sym) = three_j_errors(6);
    let block = SpBlock::from_model(&models[1])?;
    let mut ch_trace = 0.0f64;
    let mut choi_min = f64::INFINITY;
    for h in [Handedness::Right, Handedness::Left] {
        for sigma in [0.0, 0.02f64.sqrt(), 0.2] {
            let (t, c) = channel_errors(&block, &PulseChannel::new(h, sigma));
            ch_trace = worst(ch_trace, t);
            choi_min = choi_min.min(c);
        }
    }
    let flux = flux_two.max(flux_species);
    let pass = drift < TRACE_TOL
        && herm < HERMITICITY_TOL
        && min_eig >= POSITIVITY_TOL
        && decay < ANALYTIC_TOL
        && flux < ANALYTIC_TOL
        && ortho < THREE_J_TOL
        && sym < THREE_J_TOL
        && ch_trace < CHANNEL_TRACE_TOL
        && choi_min >= CHOI_TOL;
    let detail = format!(
        "trace drift {drift:.1e}, hermiticity {herm:.1e}, min eigenvalue {min_eig:.1e}, \
         two-level decay {decay:.1e}, flux balance {flux:.1e}, 3j orthogonality {ortho:.1e}, \
         3j symmetry {sym:.1e}, channel trace {ch_trace:.1e}, Choi min eigenvalue {choi_min:.1e}"
    );
    Ok(Verdict::new(1, "physics kernel", pass, detail))
}

// ---- 2: small-spread expansion ---------------------------------------------

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Residual of the wrong-block probability against `π²σ²/16` on a log grid.
pub fn expansion_residuals(lo: f64, hi: f64, count: usize) -> Vec<(f64, f64)> {
    (0..count)
        .map(|k| {
            let sigma = lo * (hi / lo).powf(k as f64 / (count - 1) as f64);
            let p = PulseChannel::new(Handedness::Right, sigma).wrong_transfer_probability();
            (sigma, (p - PI * PI * sigma * sigma / 16.0).abs())
        })
        .collect()
}

pub fn expansion() -> Verdict {
    let p = PulseChannel::new(Handedness::Right, 0.02f64.sqrt()).wrong_transfer_probability();
    let slope = log_log_slope(&expansion_residuals(0.02, 0.2, 10));
    let pass = (p - BAD_EXCITATION).abs() <= BAD_EXCITATION_TOL && (slope - 4.0).abs() <= SLOPE_TOL;
    let detail = format!(
        "wrong excitation at sqrt(0.02) = {p:.5} (target {BAD_EXCITATION} ± {BAD_EXCITATION_TOL}), \
         residual slope {slope:.3} (target 4 ± {SLOPE_TOL})"
    );
    Verdict::new(2, "small-spread expansion", pass, detail)
}

// ---- 3: fidelity limits ---------------------------------------------------

/// Largest two-digit window not above `x`, and smallest not below it.
fn snap_down(x: f64) -> f64 {
    let s = snap(x, GRID_DIGITS);
    if s <= x {
        s
    } else {
        snap(s - 10f64.powi(x.log10().floor() as i32 - (GRID_DIGITS - 1)), GRID_DIGITS)
    }
}

fn snap_up(x: f64) -> f64 {
    let s = snap(x, GRID_DIGITS);
    if s >= x {
        s
    } else {
        snap(s + 10f64.powi(x.log10().floor() as i32 - (GRID_DIGITS - 1)), GRID_DIGITS)
    }
}

#[derive(Debug, Clone)]
pub struct LimitPoint {
    pub species: String,
    pub short: SweepRow,
    pub long: SweepRow,
    pub elapsed: Duration,
}

pub fn limit_points(models: &[SpeciesModel]) -> Result<Vec<LimitPoint>> {
    let ideal = Scenario::ideal();
    models
        .iter()
        .map(|m| {
            let tau = p1_2_lifetime(m)?;
            let start = Instant::now();
            let short = run_point(m, &ideal, snap_down(tau / 10.0));
            let long = run_point(m, &ideal, snap_up(10.0 * tau));
            Ok(LimitPoint { species: m.name().to_string(), short, long, elapsed: start.elapsed() })
        })
        .collect()
}

pub fn fidelity_limits(points: &[LimitPoint]) -> Verdict {
    let mut pass = !points.is_empty();
    let mut parts = Vec::new();
    for p in points {
        let ok = p.short.converged()
            && p.long.converged()
            && (p.short.fidelity - LIMIT_LOW_FIDELITY).abs() <= LIMIT_LOW_TOL
            && p.long.fidelity >= LIMIT_HIGH_FIDELITY
            && p.elapsed < LIMIT_RUNTIME;
        pass &= ok;
        parts.push(format!(
            "{} F({:.2} ns)={:.4} F({:.0} ns)={:.5} [{:.1} s]",
            p.species,
            p.short.window * 1e9,
            p.short.fidelity,
            p.long.window * 1e9,
            p.long.fidelity,
            p.elapsed.as_secs_f64()
        ));
    }
    Verdict::new(3, "ideal fidelity limits", pass, parts.join("; "))
}

// ---- 4: realistic plateau -------------------------------------------------

pub fn fidelity_plateau(run: &TableRun) -> Result<Verdict> {
    let mut pass = true;
    let mut parts = Vec::new();
    for m in &run.models {
        let tau = p1_2_lifetime(m)?;
        let rows: Vec<&SweepRow> = run
            .results
            .iter()
            .filter(|r| r.species == m.name() && r.scenario == "realistic")
            .flat_map(|r| &r.rows)
            .filter(|r| r.converged() && r.window >= 10.0 * tau)
            .collect();
        let lo = rows.iter().map(|r| r.fidelity).fold(f64::INFINITY, f64::min);
        let hi = rows.iter().map(|r| r.fidelity).fold(f64::NEG_INFINITY, f64::max);
        let ok = !rows.is_empty() && lo >= PLATEAU.0 && hi <= PLATEAU.1;
        pass &= ok;
        parts.push(format!("{} [{lo:.4}, {hi:.4}] over {} windows", m.name(), rows.len()));
    }
    Ok(Verdict::new(
        4,
        "realistic fidelity plateau",
        pass,
        format!("windows >= 10 tau(P1/2), band [{}, {}]: {}", PLATEAU.0, PLATEAU.1, parts.join("; ")),
    ))
}

// ---- 5, 6: table rates ----------------------------------------------------

fn rate_cell(o: &Optimum, reference: f64) -> (Option<f64>, String) {
    match o.rate() {
        Some(rate) => (Some(rate / reference), format!("{rate:.0}/{reference:.0} (x{:.2})", rate / reference)),
        None => (None, format!("none/{reference:.0}")),
    }
}

fn within(ratio: Option<f64>) -> bool {
    ratio.is_some_and(|r| (1.0 - RATE_TOLERANCE..=1.0 + RATE_TOLERANCE).contains(&r))
}

pub fn ideal_rates(table: &[TableRow]) -> Verdict {
    let mut pass = table.len() == 5;
    let mut parts = Vec::new();
    let mut ratios = Vec::new();
    for row in table {
        let Some(reference) = row.reference else {
            continue;
        };
        let floor = if row.species == "Ba+" { IDEAL_FLOOR_BA } else { IDEAL_FLOOR };
        let (ratio, text) = rate_cell(&row.ideal, reference.ideal);
        let ok = within(ratio) && row.ideal.rate().is_some_and(|r| r > floor);
        pass &= ok;
        ratios.extend(ratio);
        parts.push(format!("{} {text}{}", row.species, if ok { "" } else { " !" }));
    }
    let spread = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Verdict::new(
        5,
        "ideal rates vs reference",
        pass,
        format!("{}; max/min ratio {spread:.2}", parts.join("; ")),
    )
}

pub fn realistic_rates(table: &[TableRow]) -> Verdict {
    let mut pass = table.len() == 5;
    let mut parts = Vec::new();
    for row in table {
        let Some(reference) = row.reference else {
            continue;
        };
        let (ratio, text) = rate_cell(&row.realistic, reference.realistic);
        let ok = within(ratio) && row.realistic.rate().is_some_and(|r| r > RECORD);
        pass &= ok;
        parts.push(format!("{} {text}{}", row.species, if ok { "" } else { " !" }));
    }
    Verdict::new(6, "realistic rates vs reference", pass, parts.join("; "))
}

// ---- 7: curve shapes ------------------------------------------------------

/// Shape of a rate curve: does it fall before its global maximum, and is it
/// unimodal, both up to the relative tolerance `tol`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub dip_before_peak: bool,
    pub unimodal: bool,
}

pub fn curve_shape(rates: &[f64], tol: f64) -> Shape {
    let Some(peak) = rates
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
    else {
        return Shape { dip_before_peak: false, unimodal: true };
    };
    let falls = |w: &[f64]| w[1] < w[0] * (1.0 - tol);
    let rises = |w: &[f64]| w[1] > w[0] * (1.0 + tol);
    let dip_before_peak = rates[..=peak].windows(2).any(falls);
    let unimodal = !dip_before_peak && !rates[peak..].windows(2).any(rises);
    Shape { dip_before_peak, unimodal }
}

pub fn curve_shapes(run: &TableRun) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for r in run.results.iter().filter(|r| r.scenario == "ideal") {
        let rates: Vec<f64> = r.rows.iter().filter(|x| x.converged()).map(|x| x.rate).collect();
        let shape = curve_shape(&rates, SHAPE_TOL);
        let expect_dip = matches!(r.species.as_str(), "Ca+" | "Sr+" | "Ba+");
        let ok = if expect_dip { shape.dip_before_peak } else { shape.unimodal };
        pass &= ok;
        let seen = if shape.dip_before_peak {
            "dip"
        } else if shape.unimodal {
            "unimodal"
        } else {
            "multimodal"
        };
        let want = if expect_dip { "dip" } else { "unimodal" };
        parts.push(format!("{} {seen} (want {want})", r.species));
    }
    Verdict::new(7, "ideal curve shapes", pass, parts.join("; "))
}

// ---- 8: table harness -----------------------------------------------------

pub fn table_harness(run: &TableRun) -> Verdict {
    let complete = run.table.len() == 5
        && run.table.iter().all(|r| {
            r.reference.is_some()
                && matches!(r.ideal, Optimum::Feasible { .. })
                && matches!(r.realistic, Optimum::Feasible { .. })
        });
    let failed_points: usize =
        run.results.iter().flat_map(|r| &r.rows).filter(|r| !r.converged()).count();
    let pass = complete && run.elapsed < TABLE_BUDGET;
    Verdict::new(
        8,
        "table harness",
        pass,
        format!(
            "{} species with both columns feasible: {complete}; {} sweep points ({failed_points} unconverged) \
             in {:.1} s on {} worker(s), budget {} s",
            run.table.len(),
            run.results.iter().map(|r| r.rows.len()).sum::<usize>(),
            run.elapsed.as_secs_f64(),
            run.workers,
            TABLE_BUDGET.as_secs()
        ),
    )
}

// ---- 9: determinism and speedup --------------------------------------------

/// Grid used for the parallel check: at least [`SPEEDUP_GRID`] windows.
pub fn speedup_scenario() -> Result<Scenario> {
    let mut sc = Scenario::realistic();
    let mut count = SPEEDUP_GRID;
    loop {
        let grid = WindowGrid { min: 1e-9, max: 200e-9, count, spacing: Spacing::Log };
        sc.window_grid = grid.windows()?;
        if sc.window_grid.len() >= SPEEDUP_GRID {
            return Ok(sc);
        }
        count += 1;
    }
}

pub fn determinism_and_speedup() -> Result<Verdict> {
    let models = vec![crate::species_file::resolve_species("mg")?];
    let sc = speedup_scenario()?;
    let timed = |workers| -> Result<(String, Duration)> {
        let start = Instant::now();
        let res = run_sweeps(&models, std::slice::from_ref(&sc), workers)?;
        Ok((to_csv(&res)?, start.elapsed()))
    };
    let (csv1, t1) = timed(1)?;
    let (csv3, _) = timed(3)?;
    let (csv4, t4) = timed(SPEEDUP_WORKERS)?;
    let identical = csv1 == csv3 && csv1 == csv4;
    let speedup = t1.as_secs_f64() / t4.as_secs_f64();
    let cpus = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    Ok(Verdict::new(
        9,
        "determinism and parallel speedup",
        identical && speedup >= MIN_SPEEDUP,
        format!(
            "CSV identical for 1/3/{SPEEDUP_WORKERS} workers: {identical}; {}-point grid {:.2} s -> {:.2} s, \
             speedup {speedup:.2} (need {MIN_SPEEDUP}) with {cpus} CPU(s) available",
            sc.window_grid.len(),
            t1.as_secs_f64(),
            t4.as_secs_f64()
        ),
    ))
}

/// Every criterion, in order.
pub fn run_all(workers: usize) -> Result<Vec<Verdict>> {
    let mut out = vec![kernel()?, expansion()];
    let models = builtin_species()?;
    out.push(fidelity_limits(&limit_points(&models)?));
    let run = table_run(workers)?;
    out.push(fidelity_plateau(&run)?);
    out.push(ideal_rates(&run.table));
    out.push(realistic_rates(&run.table));
    out.push(curve_shapes(&run));
    out.push(table_harness(&run));
    out.push(determinism_and_speedup()?);
    Ok(out)
}
