//! `canoma`: outage sweeps for two-user cache-aided NOMA.
//!
//! Settings are resolved in order: experiment defaults, then `--config`,
//! then individual flags.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use canoma_core::harness::{self, Experiment, HarnessError, RunConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "canoma",
    version,
    about = "Outage analysis and Monte Carlo sweeps for cache-aided NOMA"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic and empirical outage at one operating point.
    Eval(Flags),
    /// Union outage over a grid of power splits.
    SweepA(Flags),
    /// CA-NOMA, NOMA and OMA at their optimal splits over an SNR grid.
    SweepSnr(Flags),
    /// Closed-form and numeric outage-minimizing split over an SNR grid.
    SweepAmin(Flags),
}

/// Values are kept as text and parsed by the config layer, so flags and
/// config files accept the same syntax.
#[derive(Args)]
struct Flags {
    /// Flat `key = value` file applied before the flags.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Transmit SNR in dB.
    #[arg(long, value_name = "DB", allow_hyphen_values = true)]
    snr_db: Option<String>,
    /// Mean channel power.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Target rate R0 in bps/Hz.
    #[arg(long, allow_hyphen_values = true)]
    rate: Option<String>,
    /// Power split toward the strong user.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// CA-NOMA, NOMA or OMA.
    #[arg(long)]
    scheme: Option<String>,
    /// Monte Carlo draws per estimate; 0 for analytic only.
    #[arg(long, allow_hyphen_values = true)]
    samples: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Worker slices; results do not depend on this.
    #[arg(long, allow_hyphen_values = true)]
    streams: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    grid_start: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    grid_stop: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    grid_points: Option<String>,
    /// Row output file; sweeps print to stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

impl Flags {
    fn overrides(&self) -> [(&'static str, Option<&str>); 12] {
        [
            ("snr_db", self.snr_db.as_deref()),
            ("beta", self.beta.as_deref()),
            ("rate", self.rate.as_deref()),
            ("a", self.a.as_deref()),
            ("scheme", self.scheme.as_deref()),
            ("samples", self.samples.as_deref()),
            ("seed", self.seed.as_deref()),
            ("streams", self.streams.as_deref()),
            ("grid_start", self.grid_start.as_deref()),
            ("grid_stop", self.grid_stop.as_deref()),
            ("grid_points", self.grid_points.as_deref()),
            ("format", self.format.as_deref()),
        ]
    }
}

fn resolve(experiment: Experiment, flags: &Flags) -> Result<RunConfig, HarnessError> {
    let mut cfg = RunConfig::defaults(experiment);
    if let Some(path) = &flags.config {
        let text = fs::read_to_string(path).map_err(|e| {
            HarnessError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        cfg.apply_text(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {}", path.display(), e.message())))?;
    }
    for (key, value) in flags.overrides() {
        if let Some(value) = value {
            cfg.set(key, value).map_err(|e| {
                HarnessError::Config(format!("--{}: {}", key.replace('_', "-"), e.message()))
            })?;
        }
    }
    if let Some(out) = &flags.out {
        cfg.out = Some(out.clone());
    }
    Ok(cfg)
}

fn execute(experiment: Experiment, flags: &Flags) -> Result<(), HarnessError> {
    let cfg = resolve(experiment, flags)?;
    let output = harness::run(&cfg)?;
    let rendered = output.render(&cfg)?;
    let mut stdout = io::stdout().lock();
    if let Some(report) = &output.report {
        stdout.write_all(report.as_bytes())?;
    }
    match &cfg.out {
        Some(path) => fs::write(path, rendered)?,
        None if output.report.is_none() => stdout.write_all(rendered.as_bytes())?,
        None => {}
    }
    stdout.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, flags) = match &cli.command {
        Command::Eval(f) => (Experiment::Eval, f),
        Command::SweepA(f) => (Experiment::SweepA, f),
        Command::SweepSnr(f) => (Experiment::SweepSnr, f),
        Command::SweepAmin(f) => (Experiment::SweepAmin, f),
    };
    match execute(experiment, flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("canoma {experiment}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
