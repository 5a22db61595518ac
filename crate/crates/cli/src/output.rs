//! Artifact writers. CSV floats go through one fixed format so reruns with
//! the same config and seed produce byte-identical files; the manifest
//! echoes the full config next to the empirical constants so a number in a
//! report can be traced back to the exact invocation.

use std::path::Path;

use serde::Serialize;

use crate::experiments::Outcome;
use crate::{ExperimentConfig, RunError};

/// Canonical float formatting for CSV cells.
pub fn fnum(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn write_csv(path: &Path, headers: &[&str], rows: &[Vec<String>]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(headers)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    library_version: &'a str,
    harness_version: &'a str,
    config: &'a ExperimentConfig,
    constants: &'a serde_json::Map<String, serde_json::Value>,
    quad_nodes_used: usize,
    pv_scheme: &'a str,
    seed: u64,
    check_passed: bool,
    check_detail: &'a str,
    artifacts: &'a [String],
}

pub fn write_manifest(
    config: &ExperimentConfig,
    outcome: &Outcome,
    artifacts: &[String],
) -> Result<(), RunError> {
    let (check_passed, check_detail) = match &outcome.assertion {
        Ok(d) => (true, d.as_str()),
        Err(d) => (false, d.as_str()),
    };
    let manifest = Manifest {
        experiment: &config.experiment_id,
        library_version: arcpoly::VERSION,
        harness_version: env!("CARGO_PKG_VERSION"),
        config,
        constants: &outcome.constants,
        quad_nodes_used: outcome.quad_nodes_used,
        pv_scheme: &config.pv_scheme,
        seed: config.seed,
        check_passed,
        check_detail,
        artifacts,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(config.output_dir.join("manifest.json"), text)?;
    Ok(())
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Minimal log-log line plot; points with a non-positive coordinate are
/// dropped since they have no place on logarithmic axes.
pub fn write_svg(
    path: &Path,
    title: &str,
    curves: &[(String, Vec<(f64, f64)>)],
) -> Result<(), RunError> {
    const W: f64 = 640.0;
    const H: f64 = 440.0;
    const ML: f64 = 70.0; // left margin, room for tick labels
    const MR: f64 = 20.0;
    const MT: f64 = 30.0;
    const MB: f64 = 45.0;

    let logged: Vec<(String, Vec<(f64, f64)>)> = curves
        .iter()
        .map(|(name, pts)| {
            let lp = pts
                .iter()
                .filter(|(x, y)| *x > 0.0 && *y > 0.0)
                .map(|(x, y)| (x.ln(), y.ln()))
                .collect();
            (name.clone(), lp)
        })
        .collect();
    let all: Vec<(f64, f64)> = logged.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    if all.is_empty() {
        return Err(RunError::Io(format!(
            "nothing to plot for {}: no positive points",
            path.display()
        )));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (x, y) in &all {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    // keep degenerate ranges drawable
    if x1 - x0 < 1e-12 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let sx = |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
    let sy = |y: f64| H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\" font-family=\"monospace\" font-size=\"11\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n",
        W - ML - MR,
        H - MT - MB
    ));
    svg.push_str(&format!(
        "<text x=\"{ML}\" y=\"18\" font-size=\"13\">{title} (log-log)</text>\n"
    ));
    // corner tick labels, back in linear units
    svg.push_str(&format!(
        "<text x=\"{ML}\" y=\"{}\">{:.3e}</text>\n",
        H - MB + 16.0,
        x0.exp()
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3e}</text>\n",
        W - MR,
        H - MB + 16.0,
        x1.exp()
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3e}</text>\n",
        ML - 6.0,
        H - MB,
        y0.exp()
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3e}</text>\n",
        ML - 6.0,
        MT + 10.0,
        y1.exp()
    ));
    for (i, (name, pts)) in logged.iter().enumerate() {
        if pts.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            coords.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\" text-anchor=\"end\">{name}</text>\n",
            W - MR - 6.0,
            MT + 16.0 + 14.0 * i as f64
        ));
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)?;
    Ok(())
}
