//! CSV and SVG emitters.

use std::path::Path;

use anyhow::{anyhow, Context, Result};
use juggler_core::sweep::{SweepResult, SweepRow};
use plotters::prelude::*;

pub const CSV_HEADER: [&str; 8] =
    ["species", "scenario", "window_s", "rate_per_s", "fidelity", "p_r", "p_w", "shots_to_steady"];

/// Current trapped-ion REG record drawn on every rate plot, s⁻¹.
pub const RECORD_RATE: f64 = 250.0;

/// Serialize results to CSV text. Floats use Rust's shortest round-trip
/// formatting; `shots_to_steady` is empty for unconverged points.
pub fn to_csv(results: &[SweepResult]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in results {
        for row in &r.rows {
            w.write_record([
                r.species.clone(),
                r.scenario.clone(),
                row.window.to_string(),
                row.rate.to_string(),
                row.fidelity.to_string(),
                row.p_r.to_string(),
                row.p_w.to_string(),
                row.shots_to_steady.map(|s| s.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("flushing CSV: {e}"))?;
    Ok(String::from_utf8(bytes)?)
}

pub fn emit_csv(results: &[SweepResult], path: &Path) -> Result<()> {
    let text = to_csv(results)?;
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Parse CSV text written by [`to_csv`], grouping consecutive rows by
/// species and scenario.
pub fn parse_csv(text: &str) -> Result<Vec<SweepResult>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(anyhow!("unexpected CSV header {header:?}"));
    }
    let mut out: Vec<SweepResult> = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec?;
        let num = |k: usize| -> Result<f64> {
            rec[k].parse().with_context(|| format!("row {}: column {}", line + 1, CSV_HEADER[k]))
        };
        let shots = match &rec[7] {
            "" => None,
            s => Some(s.parse().with_context(|| format!("row {}: shots_to_steady", line + 1))?),
        };
        let row = SweepRow {
            window: num(2)?,
            rate: num(3)?,
            fidelity: num(4)?,
            p_r: num(5)?,
            p_w: num(6)?,
            shots_to_steady: shots,
            error: None,
        };
        match out.last_mut() {
            Some(r) if r.species == rec[0] && r.scenario == rec[1] => r.rows.push(row),
            _ => out.push(SweepResult {
                species: rec[0].to_string(),
                scenario: rec[1].to_string(),
                rows: vec![row],
            }),
        }
    }
    Ok(out)
}

const PALETTE: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(255, 127, 14),
    RGBColor(44, 160, 44),
    RGBColor(214, 39, 40),
    RGBColor(148, 103, 189),
    RGBColor(140, 86, 75),
];

/// Plot rate against window (log axes) for each result, with the 250 s⁻¹
/// record as a black horizontal line.
pub fn emit_plot(results: &[SweepResult], title: &str, path: &Path) -> Result<()> {
    let svg = plot_svg(results, title)?;
    std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))
}

pub fn plot_svg(results: &[SweepResult], title: &str) -> Result<String> {
    let finite = |r: &&SweepRow| r.rate.is_finite() && r.rate > 0.0;
    let points = || results.iter().flat_map(|r| r.rows.iter().filter(finite));
    let (mut x0, mut x1) = points().fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(r.window), b.max(r.window)));
    let y1 = points().fold(RECORD_RATE, |m, r| m.max(r.rate)) * 2.0;
    let y0 = points().fold(RECORD_RATE, |m, r| m.min(r.rate)).max(y1 * 1e-4) / 2.0;
    if !x0.is_finite() {
        x0 = 1e-9;
        x1 = 200e-9;
    }
    if x1 <= x0 {
        x1 = x0 * 10.0;
    }
    let (x0, x1) = (x0 * 1e9, x1 * 1e9);

    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (800, 560)).into_drawing_area();
        root.fill(&WHITE).map_err(plot_err)?;
        let mut chart = ChartBuilder::on(&root)
            .caption(title, ("sans-serif", 22))
            .margin(16)
            .x_label_area_size(44)
            .y_label_area_size(64)
            .build_cartesian_2d((x0..x1).log_scale(), (y0..y1).log_scale())
            .map_err(plot_err)?;
        chart
            .configure_mesh()
            .x_desc("detection window (ns)")
            .y_desc("REG rate (1/s)")
            .draw()
            .map_err(plot_err)?;
        for (k, r) in results.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let series: Vec<(f64, f64)> =
                r.rows.iter().filter(|row| finite(&row)).map(|row| (row.window * 1e9, row.rate)).collect();
            chart
                .draw_series(LineSeries::new(series, color.stroke_width(2)))
                .map_err(plot_err)?
                .label(format!("{} ({})", r.species, r.scenario))
                .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2)));
        }
        chart
            .draw_series(LineSeries::new(vec![(x0, RECORD_RATE), (x1, RECORD_RATE)], BLACK.stroke_width(2)))
            .map_err(plot_err)?
            .label("record 250 1/s")
            .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], BLACK.stroke_width(2)));
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .position(SeriesLabelPosition::UpperRight)
            .draw()
            .map_err(plot_err)?;
        root.present().map_err(plot_err)?;
    }
    Ok(svg)
}

fn plot_err<E: std::fmt::Debug>(e: E) -> anyhow::Error {
    anyhow!("plotting failed: {e:?}")
}
