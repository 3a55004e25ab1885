use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use juggler::acceptance;
use juggler::config::SweepConfig;
use juggler::output::{emit_csv, emit_plot};
use juggler::run::run_sweeps;
use juggler::species_file::{builtin_species, resolve_species, BUILTIN};
use juggler::table::{default_table, emit_table, render};
use juggler_core::{Scenario, SpeciesModel, SweepResult};

#[derive(Parser)]
#[command(name = "juggler", version, about = "Electron-juggling REG rate and fidelity sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the detection window and write CSV and SVG per scenario.
    Sweep(Common),
    /// Maximum rate at fidelity >= 0.97 for the ideal and realistic scenarios.
    Table(Common),
    /// Run the acceptance suite; exits 1 if any criterion fails.
    Check {
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    /// Built-in key (mg, ca, sr, ba, yb) or species file path; repeatable.
    #[arg(long)]
    species: Vec<String>,
    /// ideal, realistic or a label from the config file; repeatable.
    #[arg(long)]
    scenario: Vec<String>,
    /// TOML sweep configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Reserved. The simulation is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

impl Common {
    fn workers(&self) -> usize {
        self.workers.unwrap_or_else(default_workers)
    }

    fn config(&self) -> Result<SweepConfig> {
        match &self.config {
            Some(p) => SweepConfig::load(p),
            None => Ok(SweepConfig::default()),
        }
    }

    fn models(&self, cfg: &SweepConfig) -> Result<Vec<SpeciesModel>> {
        let names = if !self.species.is_empty() { &self.species } else { &cfg.species };
        if names.is_empty() {
            return builtin_species();
        }
        names.iter().map(|n| resolve_species(n)).collect()
    }

    fn scenarios(&self, cfg: &SweepConfig) -> Result<Vec<Scenario>> {
        let all = cfg.scenarios()?;
        if self.scenario.is_empty() {
            return Ok(all);
        }
        self.scenario
            .iter()
            .map(|name| {
                all.iter().find(|s| &s.label == name).cloned().with_context(|| {
                    let known: Vec<&str> = all.iter().map(|s| s.label.as_str()).collect();
                    format!("unknown scenario {name:?}; available: {}", known.join(", "))
                })
            })
            .collect()
    }
}

fn write_outputs(results: &[SweepResult], scenarios: &[Scenario], out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for sc in scenarios {
        let group: Vec<SweepResult> =
            results.iter().filter(|r| r.scenario == sc.label).cloned().collect();
        let csv = out.join(format!("{}.csv", sc.label));
        let svg = out.join(format!("{}.svg", sc.label));
        emit_csv(&group, &csv)?;
        emit_plot(&group, &format!("REG rate, {} scenario", sc.label), &svg)?;
        eprintln!("wrote {} and {}", csv.display(), svg.display());
    }
    Ok(())
}

fn report_failures(results: &[SweepResult]) {
    for r in results {
        for row in r.rows.iter().filter(|x| !x.converged()) {
            eprintln!(
                "warning: {} {} at {:e} s: {}",
                r.species,
                r.scenario,
                row.window,
                row.error.as_deref().unwrap_or("no steady state")
            );
        }
    }
}

fn sweep(args: &Common) -> Result<()> {
    let cfg = args.config()?;
    let models = args.models(&cfg)?;
    let scenarios = args.scenarios(&cfg)?;
    let start = Instant::now();
    let results = run_sweeps(&models, &scenarios, args.workers())?;
    eprintln!("{} points in {:.1} s", results.iter().map(|r| r.rows.len()).sum::<usize>(), start.elapsed().as_secs_f64());
    report_failures(&results);
    write_outputs(&results, &scenarios, &args.out_dir)
}

fn table(args: &Common) -> Result<()> {
    if !args.scenario.is_empty() {
        bail!("table always runs the ideal and realistic scenarios");
    }
    let cfg = args.config()?;
    let models = args.models(&cfg)?;
    let scenarios = [Scenario::ideal(), Scenario::realistic()];
    let start = Instant::now();
    let results = run_sweeps(&models, &scenarios, args.workers())?;
    let elapsed = start.elapsed();
    report_failures(&results);
    write_outputs(&results, &scenarios, &args.out_dir)?;
    let rows = default_table(&results);
    let text = render(&rows);
    print!("{text}");
    println!("swept in {:.1} s on {} worker(s)", elapsed.as_secs_f64(), args.workers());
    if rows.len() == BUILTIN.len() && rows.iter().all(|r| r.reference.is_some()) {
        println!("{}", acceptance::ideal_rates(&rows));
        println!("{}", acceptance::realistic_rates(&rows));
    }
    emit_table(&rows, &args.out_dir.join("table.csv"))?;
    std::fs::write(args.out_dir.join("table.txt"), text).context("writing table.txt")?;
    Ok(())
}

fn check(workers: Option<usize>) -> Result<bool> {
    let verdicts = acceptance::run_all(workers.unwrap_or_else(default_workers))?;
    for v in &verdicts {
        println!("{v}");
    }
    Ok(verdicts.iter().all(|v| v.pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(a) => sweep(a).map(|_| true),
        Command::Table(a) => table(a).map(|_| true),
        Command::Check { workers } => check(*workers),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
