//! Experiment harness for the arc-polynomial library. One experiment per
//! invocation; configuration comes from defaults, then an optional JSON
//! file, then command-line flags, in that order. Every run leaves a data
//! CSV and a JSON manifest in the output directory so any reported number
//! can be reproduced byte for byte.

mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde::{Deserialize, Serialize};

pub const EXPERIMENT_IDS: [&str; 8] = [
    "ortho-check",
    "bound-sweep",
    "para-bound",
    "hilbert-ratio",
    "converge-theorem1",
    "converge-theorem42",
    "muckenhoupt",
    "pv-crosscheck",
];

/// Full experiment description; the JSON config file mirrors this struct
/// field for field. Missing fields fall back to the defaults below.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment_id: String,
    pub alpha: f64,
    pub p: f64,
    pub degrees: Vec<usize>,
    pub quad_nodes: usize,
    pub function_id: String,
    pub k_id: String,
    pub pv_scheme: String,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment_id: "ortho-check".into(),
            alpha: std::f64::consts::FRAC_PI_2,
            p: 2.0,
            degrees: vec![4, 8, 16, 32, 64, 128, 256],
            quad_nodes: 512,
            function_id: "jump".into(),
            k_id: "two-plus-sin".into(),
            pv_scheme: "subtraction".into(),
            output_dir: PathBuf::from("out"),
            seed: 20260814,
        }
    }
}

/// How a run can go wrong, ordered by exit code: config errors exit 2,
/// failed `--assert` checks exit 3, numerical failures (non-convergent PV
/// refinement, ill-conditioned bases, non-finite results) exit 4.
#[derive(Debug)]
pub enum RunError {
    Config(String),
    Assertion(String),
    Numerical(String),
    Io(String),
}

impl From<arcpoly::ArcError> for RunError {
    fn from(e: arcpoly::ArcError) -> Self {
        if e.is_config() {
            RunError::Config(e.to_string())
        } else {
            RunError::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

impl From<csv::Error> for RunError {
    fn from(e: csv::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for RunError {
    fn from(e: serde_json::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "arcpoly",
    version,
    about = "Experiments on orthogonal polynomials and Hilbert transforms for a circular-arc weight"
)]
struct Cli {
    /// JSON config file mirroring the experiment fields; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// One of: ortho-check, bound-sweep, para-bound, hilbert-ratio,
    /// converge-theorem1, converge-theorem42, muckenhoupt, pv-crosscheck
    #[arg(long)]
    experiment: Option<String>,
    /// Arc opening angle in (0, π)
    #[arg(long)]
    alpha: Option<f64>,
    /// Lebesgue exponent
    #[arg(long)]
    p: Option<f64>,
    /// Comma list "4,8,16" or doubling ladder "4..256"
    #[arg(long)]
    degrees: Option<String>,
    /// Minimum quadrature node count
    #[arg(long)]
    quad_nodes: Option<usize>,
    /// Test function: smooth, jump, cusp, bump-left, bump-right, trig
    #[arg(long)]
    function: Option<String>,
    /// Weight multiplier: one, four, two-plus-sin, two-plus-absdev
    #[arg(long)]
    k: Option<String>,
    /// Principal-value method: subtraction, exclusion, omega
    #[arg(long)]
    pv_scheme: Option<String>,
    /// Output directory for CSV, manifest, and plots
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the randomized function families
    #[arg(long)]
    seed: Option<u64>,
    /// Exit 3 if the experiment's acceptance check fails
    #[arg(long)]
    assert: bool,
    /// Also write an SVG plot per curve
    #[arg(long)]
    plot: bool,
}

/// "4,8,16" → that list; "4..256" → the doubling ladder from 4 up to 256.
fn parse_degrees(s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad degree '{}' in range '{s}'", lo.trim()))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad degree '{}' in range '{s}'", hi.trim()))?;
        if lo == 0 || hi < lo {
            return Err(format!("degree range '{s}' must be 0 < lo <= hi"));
        }
        let mut v = vec![lo];
        let mut d = lo;
        while d * 2 <= hi {
            d *= 2;
            v.push(d);
        }
        Ok(v)
    } else {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("bad degree '{}'", t.trim()))
            })
            .collect()
    }
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(v) = &cli.experiment {
        cfg.experiment_id = v.clone();
    }
    if let Some(v) = cli.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = cli.p {
        cfg.p = v;
    }
    if let Some(v) = &cli.degrees {
        cfg.degrees = parse_degrees(v)?;
    }
    if let Some(v) = cli.quad_nodes {
        cfg.quad_nodes = v;
    }
    if let Some(v) = &cli.function {
        cfg.function_id = v.clone();
    }
    if let Some(v) = &cli.k {
        cfg.k_id = v.clone();
    }
    if let Some(v) = &cli.pv_scheme {
        cfg.pv_scheme = v.clone();
    }
    if let Some(v) = &cli.out {
        cfg.output_dir = v.clone();
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
    };
    match experiments::run(&config, cli.assert, cli.plot) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(RunError::Config(m)) => {
            eprintln!("config error: {m}");
            ExitCode::from(2)
        }
        Err(RunError::Assertion(m)) => {
            eprintln!("assertion failed: {m}");
            ExitCode::from(3)
        }
        Err(RunError::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(4)
        }
        Err(RunError::Io(m)) => {
            eprintln!("io error: {m}");
            ExitCode::FAILURE
        }
    }
}
