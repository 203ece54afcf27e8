//! Scenario runner behind the `crosskerr` binary.
//!
//! A scenario is a protocol plus parameters, read from an optional JSON file
//! (`--config`) whose keys mirror the flag names, with flags taking
//! precedence. `run` writes one JSON document, `sweep` one CSV table,
//! `validate` only resolves and checks the scenario.
//!
//! Exit codes: 0 success, 2 configuration error, 3 failed physical
//! precondition, 4 numerical tolerance violation.

mod config;

pub use config::{Amplitude, Mode, Scenario, ScenarioConfig};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::protocols::{Protocol, ProtocolReport};
use crate::{Error, ErrorKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

/// Significant digits in every number written.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "crosskerr", version, about = "Atom-field protocols in the dispersive cross-Kerr limit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario and write a JSON report.
    Run(ScenarioArgs),
    /// Evaluate a scenario over a grid of one parameter and write CSV.
    Sweep(SweepArgs),
    /// Resolve and check a scenario without running it.
    Validate(ScenarioArgs),
    /// List the available protocols.
    List,
}

#[derive(Debug, Default, Args)]
pub struct ScenarioArgs {
    /// JSON file with scenario keys (same names as the flags).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub protocol: Option<String>,
    /// Coherent amplitude of mode a: `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<Amplitude>,
    /// Coherent amplitude of mode b (defaults to alpha).
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<Amplitude>,
    /// Sets alpha = beta = iγ.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Width of the Gaussian field measurement.
    #[arg(long)]
    pub delta_width: Option<f64>,
    #[arg(long)]
    pub n_pairs: Option<usize>,
    /// Input qubit amplitude on |g>.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Input qubit amplitude on |e>.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// ideal | gaussian (reciprocation) | homodyne (entanglement_swap).
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub postselect: Option<bool>,
    /// Atomic outcome signs for the multi-pair protocols, e.g. `++-+`.
    #[arg(long, allow_hyphen_values = true)]
    pub outcomes: Option<String>,
    /// Fock cutoff overriding the truncation rule.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Detuning over coupling used for the validity check.
    #[arg(long)]
    pub detuning_ratio: Option<f64>,
    /// dispersive | exact.
    #[arg(long)]
    pub dynamics: Option<String>,
    #[arg(long)]
    pub residual_bound: Option<f64>,
    /// Output file (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Parameter to vary, by flag name (alpha, beta, gamma, delta-width, ...).
    #[arg(long)]
    pub axis: String,
    /// Explicit grid: comma-separated values.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', conflicts_with = "range")]
    pub values: Vec<f64>,
    /// Uniform grid `start:stop:count` (inclusive).
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
}

/// Failure of a CLI invocation, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Run(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Run(e) => match e.kind() {
                ErrorKind::Config => EXIT_CONFIG,
                ErrorKind::Precondition => EXIT_PRECONDITION,
                ErrorKind::Tolerance => EXIT_TOLERANCE,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::List => {
            let mut text = String::new();
            for p in Protocol::ALL {
                text.push_str(&format!("{:<26}{}\n", p.name(), p.description()));
            }
            emit(None, &text)
        }
        Command::Validate(args) => {
            let config = args.into_config()?;
            let scenario = config.resolve()?;
            emit(config.out.as_deref(), &to_json(&scenario)?)
        }
        Command::Run(args) => {
            let config = args.into_config()?;
            let scenario = config.resolve()?;
            let report = scenario.run()?;
            emit(config.out.as_deref(), &render_run(&scenario, &report)?)
        }
        Command::Sweep(args) => {
            let grid = args.grid()?;
            let config = args.scenario.into_config()?;
            let table = sweep(&config, &args.axis, &grid)?;
            emit(config.out.as_deref(), &table)
        }
    }
}

impl ScenarioArgs {
    fn flags(&self) -> ScenarioConfig {
        ScenarioConfig {
            protocol: self.protocol.clone(),
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            delta_width: self.delta_width,
            n_pairs: self.n_pairs,
            a: self.a,
            b: self.b,
            mode: self.mode.clone(),
            postselect: self.postselect,
            outcomes: self.outcomes.clone(),
            n_max: self.n_max,
            detuning_ratio: self.detuning_ratio,
            dynamics: self.dynamics.clone(),
            residual_bound: self.residual_bound,
            out: self.out.clone(),
        }
    }

    /// Config file (if any) overlaid by the flags.
    pub fn into_config(self) -> CliResult<ScenarioConfig> {
        let base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                ScenarioConfig::from_json(&text)?
            }
            None => ScenarioConfig::default(),
        };
        Ok(base.overlay(self.flags()))
    }
}

impl SweepArgs {
    pub fn grid(&self) -> CliResult<Vec<f64>> {
        let Some(range) = &self.range else {
            return Ok(self.values.clone());
        };
        let bad = || CliError::Config(format!("range must be start:stop:count, got '{range}'"));
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(bad());
        };
        let start: f64 = start.trim().parse().map_err(|_| bad())?;
        let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        Ok(match count {
            0 => vec![],
            1 => vec![start],
            _ => (0..count)
                .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                .collect(),
        })
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Text form of a rounded number; scientific outside `[1e-4, 1e15)`.
pub fn format_number(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 || !r.is_finite() || (1e-4..1e15).contains(&r.abs()) {
        r.to_string()
    } else {
        format!("{r:e}")
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_sig(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::Config(e.to_string()))?;
    round_value(&mut v);
    let mut text = serde_json::to_string_pretty(&v).map_err(|e| CliError::Config(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// JSON document of one run: the resolved scenario and the report.
pub fn render_run(scenario: &Scenario, report: &ProtocolReport) -> CliResult<String> {
    #[derive(Serialize)]
    struct Doc<'a> {
        config: &'a Scenario,
        report: &'a ProtocolReport,
    }
    to_json(&Doc {
        config: scenario,
        report,
    })
}

/// Evaluates the scenario at each grid value (in parallel) and returns a
/// CSV table with one row per value, in grid order. Columns are the axis,
/// `total_probability` and the union of all summary keys.
pub fn sweep(config: &ScenarioConfig, axis: &str, grid: &[f64]) -> CliResult<String> {
    // Reject a bad axis even for an empty grid.
    config.with_axis(axis, 0.0)?;
    let rows: Vec<(f64, ProtocolReport)> = grid
        .par_iter()
        .map(|&v| {
            let report = config.with_axis(axis, v)?.resolve()?.run()?;
            Ok((v, report))
        })
        .collect::<CliResult<_>>()?;

    let keys: BTreeSet<&str> = rows
        .iter()
        .flat_map(|(_, r)| r.summary.keys().map(String::as_str))
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = [axis, "total_probability"].into_iter().chain(keys.iter().copied());
    w.write_record(header).map_err(csv_error)?;
    let num = format_number;
    for (v, r) in &rows {
        let mut record = vec![num(*v), num(r.total_probability())];
        record.extend(keys.iter().map(|k| r.get(k).map(num).unwrap_or_default()));
        w.write_record(&record).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Config(e.to_string()))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Config(format!("csv: {e}"))
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Config(format!("stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(json: &str) -> ScenarioConfig {
        ScenarioConfig::from_json(json).unwrap()
    }

    #[test]
    fn flags_override_file() {
        let file = config(r#"{"protocol": "reciprocation", "alpha": 3, "delta-width": 1}"#);
        let flags = ScenarioConfig {
            alpha: Some(Amplitude::Real(2.0)),
            ..Default::default()
        };
        let c = file.overlay(flags);
        assert_eq!(c.alpha, Some(Amplitude::Real(2.0)));
        assert_eq!(c.delta_width, Some(1.0));
        assert_eq!(c.protocol.as_deref(), Some("reciprocation"));
    }

    #[test]
    fn unknown_key_is_a_config_error() {
        let e = ScenarioConfig::from_json(r#"{"alpah": 2}"#).unwrap_err();
        assert_eq!(CliError::from(e).exit_code(), EXIT_CONFIG);
    }

    #[test]
    fn gamma_sets_both_amplitudes() {
        let s = config(r#"{"protocol": "entanglement_transfer", "gamma": 1.5}"#).resolve().unwrap();
        assert_eq!(s.alpha, crate::CoherentLabel::new(0.0, 1.5));
        assert_eq!(s.beta, s.alpha);
        let both = config(r#"{"protocol": "entanglement_transfer", "gamma": 1, "alpha": 1}"#);
        assert!(both.resolve().is_err());
    }

    #[test]
    fn mode_must_fit_protocol() {
        let c = config(r#"{"protocol": "entanglement_transfer", "mode": "gaussian"}"#);
        assert_eq!(CliError::from(c.resolve().unwrap_err()).exit_code(), EXIT_CONFIG);
        let c = config(r#"{"protocol": "entanglement_swap"}"#);
        assert_eq!(c.resolve().unwrap().mode, Mode::Homodyne);
    }

    #[test]
    fn unnormalized_input_is_a_precondition_failure() {
        let c = config(r#"{"protocol": "transfer_qubit_to_qubit", "a": 1, "b": 1}"#);
        assert_eq!(CliError::from(c.resolve().unwrap_err()).exit_code(), EXIT_PRECONDITION);
    }

    #[test]
    fn amplitude_parsing() {
        assert_eq!("2".parse::<Amplitude>().unwrap(), Amplitude::Real(2.0));
        assert_eq!("-1,0.5".parse::<Amplitude>().unwrap(), Amplitude::Complex([-1.0, 0.5]));
        assert!("x".parse::<Amplitude>().is_err());
        let c = config(r#"{"alpha": [0, 2]}"#);
        assert_eq!(c.alpha, Some(Amplitude::Complex([0.0, 2.0])));
    }

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(0.832534612345678), 0.832534612346);
        assert_eq!(round_sig(123456.7890123456), 123456.789012);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(format_number(2.317874212861e-16), "2.31787421286e-16");
        assert_eq!(format_number(-0.5), "-0.5");
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let c = config(r#"{"protocol": "reciprocation"}"#);
        assert_eq!(sweep(&c, "alpha", &[]).unwrap(), "alpha,total_probability\n");
        assert!(sweep(&c, "colour", &[]).is_err());
    }

    #[test]
    fn sweep_rows_follow_grid_order() {
        let c = config(r#"{"protocol": "transfer_qubit_to_qubit", "b": 0}"#);
        let table = sweep(&c, "a", &[1.0, -1.0]).unwrap();
        let rows: Vec<&str> = table.lines().collect();
        assert_eq!(rows.len(), 3);
        assert!(rows[1].starts_with("1,"));
        assert!(rows[2].starts_with("-1,"));
    }

    #[test]
    fn range_grid() {
        let args = SweepArgs {
            scenario: ScenarioArgs::default(),
            axis: "alpha".into(),
            values: vec![],
            range: Some("0:1:5".into()),
        };
        assert_eq!(args.grid().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
