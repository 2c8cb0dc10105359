//! Run configuration: per-experiment defaults, `key = value` files and overrides.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::outage::Scheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Eval,
    SweepA,
    SweepSnr,
    SweepAmin,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Eval => "eval",
            Experiment::SweepA => "sweep-a",
            Experiment::SweepSnr => "sweep-snr",
            Experiment::SweepAmin => "sweep-amin",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s.trim() {
            "eval" => Ok(Experiment::Eval),
            "sweep-a" => Ok(Experiment::SweepA),
            "sweep-snr" => Ok(Experiment::SweepSnr),
            "sweep-amin" => Ok(Experiment::SweepAmin),
            other => Err(HarnessError::Config(format!(
                "unknown experiment '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(HarnessError::Config(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

/// Uniform grid `start..=stop` with `points` entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + span * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub snr_db: f64,
    pub beta: f64,
    pub rate: f64,
    pub a: f64,
    pub scheme: Scheme,
    /// Monte Carlo draws per estimate; 0 skips the empirical columns.
    pub samples: u64,
    pub seed: u64,
    /// Worker count; never changes results.
    #[serde(skip)]
    pub streams: u32,
    pub grid: GridSpec,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

pub const DEFAULT_SEED: u64 = 2017;
pub const DEFAULT_STREAMS: u32 = 4;

impl RunConfig {
    /// Reference settings: 20 dB, beta = 2, R0 = 2.
    pub fn defaults(experiment: Experiment) -> Self {
        let (samples, grid) = match experiment {
            Experiment::Eval => (
                1_000_000,
                GridSpec {
                    start: 0.005,
                    stop: 0.30,
                    points: 100,
                },
            ),
            Experiment::SweepA => (
                100_000,
                GridSpec {
                    start: 0.005,
                    stop: 0.30,
                    points: 100,
                },
            ),
            Experiment::SweepSnr => (
                100_000,
                GridSpec {
                    start: 5.0,
                    stop: 40.0,
                    points: 15,
                },
            ),
            Experiment::SweepAmin => (
                100_000,
                GridSpec {
                    start: 0.0,
                    stop: 40.0,
                    points: 81,
                },
            ),
        };
        Self {
            experiment,
            snr_db: 20.0,
            beta: 2.0,
            rate: 2.0,
            a: 0.2,
            scheme: Scheme::CaNoma,
            samples,
            seed: DEFAULT_SEED,
            streams: DEFAULT_STREAMS,
            grid,
            out: None,
            format: OutputFormat::Csv,
        }
    }

    /// Applies one `key = value` setting. Keys accept `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "experiment" => {
                let e: Experiment = value.parse()?;
                if e != self.experiment {
                    return Err(HarnessError::Config(format!(
                        "config is for experiment '{e}' but '{}' was requested",
                        self.experiment
                    )));
                }
            }
            "snr_db" => self.snr_db = parse_float(&key, value)?,
            "beta" => self.beta = parse_float(&key, value)?,
            "rate" => self.rate = parse_float(&key, value)?,
            "a" => self.a = parse_float(&key, value)?,
            "scheme" => {
                self.scheme = value.parse().map_err(|e: crate::outage::UnknownScheme| {
                    HarnessError::Config(e.to_string())
                })?
            }
            "samples" => self.samples = parse_count(&key, value)?,
            "seed" => self.seed = parse_count(&key, value)?,
            "streams" => {
                self.streams = u32::try_from(parse_count(&key, value)?)
                    .map_err(|_| HarnessError::Config(format!("streams out of range: {value}")))?
            }
            "grid_start" => self.grid.start = parse_float(&key, value)?,
            "grid_stop" => self.grid.stop = parse_float(&key, value)?,
            "grid_points" => {
                self.grid.points = usize::try_from(parse_count(&key, value)?).map_err(|_| {
                    HarnessError::Config(format!("grid_points out of range: {value}"))
                })?
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            _ => return Err(HarnessError::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Applies a flat config file: one `key = value` per line, `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), HarnessError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!(
                    "line {}: expected 'key = value', got '{line}'",
                    n + 1
                ))
            })?;
            self.set(key, value)
                .map_err(|e| HarnessError::Config(format!("line {}: {}", n + 1, e.message())))?;
        }
        Ok(())
    }

    /// Structural checks; parameter domains are checked when the run starts.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.streams == 0 {
            return Err(HarnessError::Config("streams must be at least 1".into()));
        }
        if self.experiment != Experiment::Eval {
            let g = &self.grid;
            if !(g.start.is_finite() && g.stop.is_finite()) || g.start >= g.stop {
                return Err(HarnessError::Config(format!(
                    "grid needs finite start < stop, got {}..{}",
                    g.start, g.stop
                )));
            }
            if g.points < 2 {
                return Err(HarnessError::Config(format!(
                    "grid needs at least 2 points, got {}",
                    g.points
                )));
            }
        }
        Ok(())
    }
}

fn parse_float(key: &str, value: &str) -> Result<f64, HarnessError> {
    value
        .parse::<f64>()
        .map_err(|_| HarnessError::Config(format!("{key}: expected a number, got '{value}'")))
}

/// Non-negative integer; accepts `1e6` style input when it is integral.
fn parse_count(key: &str, value: &str) -> Result<u64, HarnessError> {
    if let Ok(v) = value.parse::<u64>() {
        return Ok(v);
    }
    match value.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < u64::MAX as f64 => Ok(v as u64),
        _ => Err(HarnessError::Config(format!(
            "{key}: expected a non-negative integer, got '{value}'"
        ))),
    }
}
