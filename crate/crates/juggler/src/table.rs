//! Maximum REG rate per species at a fidelity floor, for the ideal and
//! realistic scenarios side by side.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use juggler_core::sweep::{max_rate_at_fidelity, Optimum, SweepResult, TABLE_FIDELITY};

/// Published maximum rates (s⁻¹) at fidelity ≥ 0.97.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub species: &'static str,
    pub ideal: f64,
    pub realistic: f64,
}

pub const REFERENCE: [Reference; 5] = [
    Reference { species: "Mg+", ideal: 6540.0, realistic: 950.0 },
    Reference { species: "Ca+", ideal: 2258.0, realistic: 717.0 },
    Reference { species: "Sr+", ideal: 2526.0, realistic: 760.0 },
    Reference { species: "Ba+", ideal: 941.0, realistic: 511.0 },
    Reference { species: "Yb+", ideal: 3146.0, realistic: 823.0 },
];

pub fn reference_for(species: &str) -> Option<Reference> {
    REFERENCE.iter().copied().find(|r| r.species.eq_ignore_ascii_case(species))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub species: String,
    pub ideal: Optimum,
    pub realistic: Optimum,
    pub reference: Option<Reference>,
}

fn optimum_for(results: &[SweepResult], species: &str, scenario: &str, f_min: f64) -> Optimum {
    results
        .iter()
        .find(|r| r.species == species && r.scenario == scenario)
        .map(|r| max_rate_at_fidelity(r, f_min))
        .unwrap_or(Optimum::NoFeasible)
}

/// One row per species, in first-seen order, using the `ideal` and
/// `realistic` scenario results.
pub fn build_table(results: &[SweepResult], f_min: f64) -> Vec<TableRow> {
    let mut species: Vec<&str> = Vec::new();
    for r in results {
        if !species.contains(&r.species.as_str()) {
            species.push(&r.species);
        }
    }
    species
        .into_iter()
        .map(|sp| TableRow {
            species: sp.to_string(),
            ideal: optimum_for(results, sp, "ideal", f_min),
            realistic: optimum_for(results, sp, "realistic", f_min),
            reference: reference_for(sp),
        })
        .collect()
}

pub fn default_table(results: &[SweepResult]) -> Vec<TableRow> {
    build_table(results, TABLE_FIDELITY)
}

fn cell(o: &Optimum, reference: Option<f64>) -> String {
    match o {
        Optimum::Feasible { window, rate, fidelity } => {
            let ratio = reference.map(|r| format!(" x{:.2}", rate / r)).unwrap_or_default();
            format!("{rate:7.0} @ {:5.1} ns F={fidelity:.4}{ratio}", window * 1e9)
        }
        Optimum::NoFeasible => "no feasible window".to_string(),
    }
}

/// Fixed-width text rendering, with the published value and ratio.
pub fn render(rows: &[TableRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<8} {:<40} {:>6}   {:<40} {:>6}",
        "species", "ideal (rate 1/s @ window)", "ref", "realistic", "ref"
    );
    for row in rows {
        let (ri, rr) = match row.reference {
            Some(r) => (Some(r.ideal), Some(r.realistic)),
            None => (None, None),
        };
        let fmt_ref = |v: Option<f64>| v.map(|v| format!("{v:.0}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            s,
            "{:<8} {:<40} {:>6}   {:<40} {:>6}",
            row.species,
            cell(&row.ideal, ri),
            fmt_ref(ri),
            cell(&row.realistic, rr),
            fmt_ref(rr)
        );
    }
    s
}

/// CSV form: `species,scenario,window_s,rate_per_s,fidelity,reference_per_s`.
pub fn to_csv(rows: &[TableRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["species", "scenario", "window_s", "rate_per_s", "fidelity", "reference_per_s"])?;
    for row in rows {
        for (scenario, o, reference) in [
            ("ideal", &row.ideal, row.reference.map(|r| r.ideal)),
            ("realistic", &row.realistic, row.reference.map(|r| r.realistic)),
        ] {
            let reference = reference.map(|r| r.to_string()).unwrap_or_default();
            match o {
                Optimum::Feasible { window, rate, fidelity } => w.write_record([
                    row.species.as_str(),
                    scenario,
                    &window.to_string(),
                    &rate.to_string(),
                    &fidelity.to_string(),
                    &reference,
                ])?,
                Optimum::NoFeasible => {
                    w.write_record([row.species.as_str(), scenario, "", "", "", &reference])?
                }
            }
        }
    }
    Ok(String::from_utf8(w.into_inner().context("flushing table csv")?)?)
}

pub fn emit_table(rows: &[TableRow], path: &Path) -> Result<()> {
    std::fs::write(path, to_csv(rows)?).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use juggler_core::SweepRow;

    fn row(window: f64, rate: f64, fidelity: f64) -> SweepRow {
        SweepRow {
            window,
            rate,
            fidelity,
            p_r: 0.5,
            p_w: 0.0,
            shots_to_steady: Some(10),
            error: None,
        }
    }

    fn result(species: &str, scenario: &str, rows: Vec<SweepRow>) -> SweepResult {
        SweepResult { species: species.into(), scenario: scenario.into(), rows }
    }

    #[test]
    fn pairs_scenarios_per_species() {
        let results = vec![
            result("Ca+", "ideal", vec![row(1e-8, 3000.0, 0.9), row(3e-8, 2000.0, 0.98)]),
            result("Ca+", "realistic", vec![row(3e-8, 700.0, 0.985)]),
        ];
        let t = default_table(&results);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].ideal.rate(), Some(2000.0));
        assert_eq!(t[0].realistic.rate(), Some(700.0));
        assert_eq!(t[0].reference.unwrap().ideal, 2258.0);
    }

    #[test]
    fn missing_scenario_is_not_feasible() {
        let results = vec![result("Xe+", "ideal", vec![row(1e-8, 10.0, 1.0)])];
        let t = default_table(&results);
        assert_eq!(t[0].realistic, Optimum::NoFeasible);
        assert!(t[0].reference.is_none());
        assert!(render(&t).contains("no feasible window"));
    }

    #[test]
    fn csv_has_two_lines_per_species() {
        let results = vec![result("Mg+", "ideal", vec![row(1.7e-8, 6500.0, 0.975)])];
        let text = to_csv(&default_table(&results)).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.contains("Mg+,ideal,0.000000017,6500,0.975,6540"));
        assert!(text.contains("Mg+,realistic,,,,950"));
    }
}
