//! Parallel sweeps over (species, scenario, window) points.

use anyhow::{Context, Result};
use juggler_core::sweep::{run_point, Scenario, SweepResult};
use juggler_core::SpeciesModel;
use rayon::prelude::*;

/// Run every scenario for every species on a pool of `workers` threads.
///
/// Points are independent; results come back in input order regardless of
/// scheduling, so output is identical for any worker count.
pub fn run_sweeps(
    models: &[SpeciesModel],
    scenarios: &[Scenario],
    workers: usize,
) -> Result<Vec<SweepResult>> {
    for s in scenarios {
        s.validate().with_context(|| format!("scenario {}", s.label))?;
    }
    let jobs: Vec<(usize, usize, f64)> = models
        .iter()
        .enumerate()
        .flat_map(|(m, _)| {
            scenarios
                .iter()
                .enumerate()
                .flat_map(move |(s, sc)| sc.window_grid.iter().map(move |&w| (m, s, w)))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .context("building worker pool")?;
    let rows = pool.install(|| {
        jobs.par_iter()
            .map(|&(m, s, w)| run_point(&models[m], &scenarios[s], w))
            .collect::<Vec<_>>()
    });

    let mut rows = rows.into_iter();
    let mut out = Vec::with_capacity(models.len() * scenarios.len());
    for model in models {
        for sc in scenarios {
            out.push(SweepResult {
                species: model.name().to_string(),
                scenario: sc.label.clone(),
                rows: rows.by_ref().take(sc.window_grid.len()).collect(),
            });
        }
    }
    Ok(out)
}

/// Single-species, single-scenario convenience wrapper.
pub fn run_sweep(model: &SpeciesModel, scenario: &Scenario, workers: usize) -> Result<SweepResult> {
    let mut out = run_sweeps(std::slice::from_ref(model), std::slice::from_ref(scenario), workers)?;
    Ok(out.remove(0))
}
