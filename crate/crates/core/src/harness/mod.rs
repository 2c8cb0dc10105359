//! Experiment runner behind the `canoma` command line.
//!
//! Each experiment turns a [`RunConfig`] into [`SweepRow`]s:
//!
//! - `eval`: one `(params, a, scheme)` point, plus a text report.
//! - `sweep-a`: union outage over a grid of power splits.
//! - `sweep-snr`: CA-NOMA at the closed-form `a_min`, NOMA at its numeric
//!   optimum and OMA over an SNR grid in dB. All three schemes at a grid
//!   point share the same channel draws.
//! - `sweep-amin`: closed-form (clamped and unclamped) and numeric `a_min`
//!   over an SNR grid, each with its outage.
//!
//! Grid point `i` draws from master seed `point_seed(seed, i)`, and that
//! derived seed is written into the row. Running `eval --seed <row seed>`
//! with the row's parameters reproduces the row's empirical columns.

mod config;
mod rows;

use std::fmt::Write as _;

use thiserror::Error;

pub use config::{Experiment, GridSpec, OutputFormat, RunConfig, DEFAULT_SEED, DEFAULT_STREAMS};
pub use rows::{
    format_sig9, quantize, read_csv, read_json, write_csv, write_json, JsonDocument, SweepRow,
    CSV_HEADER,
};

use crate::error::Error;
use crate::model::{
    threshold_b1, threshold_b2, threshold_b21, Feasibility, PowerSplit, SystemParams, Threshold,
};
use crate::montecarlo::{estimate_outage, point_seed, McConfig};
use crate::optimizer::{a_min_closed_form, a_min_numeric, a_star_noma_numeric, DEFAULT_TOL};
use crate::outage::{outage_breakdown_analytic, union_outage_ca_noma, OutageBreakdown, Scheme};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invalid parameters: {0}")]
    Domain(#[from] Error),
    #[error("malformed results: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit status: 2 for configuration problems, 3 for parameters
    /// outside the model's domain, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Domain(_) => 3,
            HarnessError::Parse(_) | HarnessError::Io(_) => 1,
        }
    }

    /// The message without the category prefix.
    pub fn message(&self) -> String {
        match self {
            HarnessError::Config(m) | HarnessError::Parse(m) => m.clone(),
            other => other.to_string(),
        }
    }

    pub(crate) fn csv(e: csv::Error) -> Self {
        HarnessError::Parse(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub rows: Vec<SweepRow>,
    /// Human-readable summary (only `eval` produces one).
    pub report: Option<String>,
}

impl RunOutput {
    pub fn render(&self, cfg: &RunConfig) -> Result<String, HarnessError> {
        match cfg.format {
            OutputFormat::Csv => write_csv(&self.rows),
            OutputFormat::Json => write_json(cfg, &self.rows),
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput, HarnessError> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::Eval => cmd_eval(cfg),
        Experiment::SweepA => cmd_sweep_a(cfg).map(rows_only),
        Experiment::SweepSnr => cmd_sweep_snr(cfg).map(rows_only),
        Experiment::SweepAmin => cmd_sweep_amin(cfg).map(rows_only),
    }
}

fn rows_only(rows: Vec<SweepRow>) -> RunOutput {
    RunOutput { rows, report: None }
}

fn mc_config(cfg: &RunConfig, seed: u64) -> Result<Option<McConfig>, Error> {
    if cfg.samples == 0 {
        return Ok(None);
    }
    McConfig::new(cfg.samples, seed, cfg.streams).map(Some)
}

fn row(
    scheme: impl Into<String>,
    a: Option<f64>,
    snr_db: f64,
    cfg: &RunConfig,
    analytic: Option<f64>,
    empirical: Option<(&OutageBreakdown, &McConfig)>,
) -> SweepRow {
    SweepRow {
        scheme: scheme.into(),
        a,
        snr_db,
        beta: cfg.beta,
        rate_bps_hz: cfg.rate,
        p_analytic: analytic,
        p_empirical: empirical.map(|(b, _)| b.p_union),
        se: empirical.map(|(b, _)| b.se_union),
        n_samples: empirical.map(|(_, mc)| mc.n_samples),
        seed: empirical.map(|(_, mc)| mc.master_seed),
    }
}

/// Any split works for OMA; the value is never read.
fn oma_placeholder_split() -> PowerSplit {
    PowerSplit::unchecked(0.5)
}

fn scheme_split(cfg: &RunConfig, scheme: Scheme) -> Result<(PowerSplit, Option<f64>), Error> {
    match scheme {
        Scheme::Oma => Ok((oma_placeholder_split(), None)),
        _ => Ok((PowerSplit::new(cfg.a)?, Some(cfg.a))),
    }
}

fn fmt_threshold(t: Threshold) -> String {
    match t {
        Threshold::Gain(g) => format_sig9(g),
        Threshold::Infeasible => "infeasible".into(),
    }
}

fn breakdown_line(label: &str, b: &OutageBreakdown) -> String {
    format!(
        "{label:<11}{:>16}{:>16}{:>16}{:>16}{:>16}",
        format_sig9(b.p_a1),
        format_sig9(b.p_a2),
        format_sig9(b.p_a21),
        format_sig9(b.p_union),
        format_sig9(b.se_union),
    )
}

/// One point: analytic and empirical breakdowns plus thresholds.
pub fn cmd_eval(cfg: &RunConfig) -> Result<RunOutput, HarnessError> {
    let p = SystemParams::from_db(cfg.snr_db, cfg.beta, cfg.rate)?;
    let (a, a_col) = scheme_split(cfg, cfg.scheme)?;
    let analytic = outage_breakdown_analytic(&p, a, cfg.scheme);
    let mc = mc_config(cfg, cfg.seed)?;
    let empirical = mc
        .as_ref()
        .map(|mc| estimate_outage(&p, a, cfg.scheme, mc))
        .transpose()?;

    let mut report = String::new();
    let _ = writeln!(report, "scheme      {}", cfg.scheme);
    let _ = writeln!(
        report,
        "snr         {} dB (linear {})",
        format_sig9(cfg.snr_db),
        format_sig9(p.snr())
    );
    let _ = writeln!(report, "beta        {}", format_sig9(cfg.beta));
    let _ = writeln!(report, "rate        {} bps/Hz", format_sig9(cfg.rate));
    if cfg.scheme == Scheme::Oma {
        let _ = writeln!(
            report,
            "threshold   (4^R0-1)/xi = {}",
            format_sig9(p.oma_threshold())
        );
    } else {
        let _ = writeln!(report, "a           {}", format_sig9(a.value()));
        let _ = writeln!(
            report,
            "thresholds  b1 = {}  b2 = {}  b21 = {}",
            format_sig9(threshold_b1(&p, a)),
            format_sig9(threshold_b2(&p, a)),
            fmt_threshold(threshold_b21(&p, a)),
        );
        let _ = writeln!(
            report,
            "feasibility {}",
            Feasibility::classify(&p, a).describe()
        );
    }
    let _ = writeln!(
        report,
        "{:<11}{:>16}{:>16}{:>16}{:>16}{:>16}",
        "", "p_A1", "p_A2", "p_A21", "p_union", "se"
    );
    let _ = writeln!(report, "{}", breakdown_line("analytic", &analytic));
    match (&empirical, &mc) {
        (Some(b), Some(mc)) => {
            let _ = writeln!(report, "{}", breakdown_line("empirical", b));
            let _ = writeln!(
                report,
                "samples     {} (seed {})",
                mc.n_samples, mc.master_seed
            );
        }
        _ => {
            let _ = writeln!(report, "empirical   skipped (samples = 0)");
        }
    }

    let rows = vec![row(
        cfg.scheme.name(),
        a_col,
        cfg.snr_db,
        cfg,
        Some(analytic.p_union),
        empirical.as_ref().zip(mc.as_ref()),
    )];
    Ok(RunOutput {
        rows,
        report: Some(report),
    })
}

/// Union outage of `cfg.scheme` over the power-split grid.
pub fn cmd_sweep_a(cfg: &RunConfig) -> Result<Vec<SweepRow>, HarnessError> {
    let p = SystemParams::from_db(cfg.snr_db, cfg.beta, cfg.rate)?;
    cfg.grid
        .values()
        .into_iter()
        .enumerate()
        .map(|(i, a_raw)| {
            let (a, a_col) = match cfg.scheme {
                Scheme::Oma => (oma_placeholder_split(), None),
                _ => (
                    PowerSplit::new(a_raw).map_err(|e| e.at_point(i))?,
                    Some(a_raw),
                ),
            };
            let analytic = outage_breakdown_analytic(&p, a, cfg.scheme).p_union;
            let mc = mc_config(cfg, point_seed(cfg.seed, i))?;
            let emp = mc
                .as_ref()
                .map(|mc| estimate_outage(&p, a, cfg.scheme, mc))
                .transpose()?;
            Ok(row(
                cfg.scheme.name(),
                a_col,
                cfg.snr_db,
                cfg,
                Some(analytic),
                emp.as_ref().zip(mc.as_ref()),
            ))
        })
        .collect()
}

/// CA-NOMA at the clamped closed-form `a_min`, NOMA at its numeric optimum, and OMA.
pub fn cmd_sweep_snr(cfg: &RunConfig) -> Result<Vec<SweepRow>, HarnessError> {
    let mut rows = Vec::with_capacity(3 * cfg.grid.points);
    for (i, snr_db) in cfg.grid.values().into_iter().enumerate() {
        let at = |e: Error| e.at_point(i);
        let p = SystemParams::from_db(snr_db, cfg.beta, cfg.rate).map_err(at)?;
        let a_ca = a_min_closed_form(&p).map_err(at)?.a;
        let a_noma = a_star_noma_numeric(&p, DEFAULT_TOL).map_err(at)?;
        let mc = mc_config(cfg, point_seed(cfg.seed, i))?;
        for (scheme, a, a_col) in [
            (Scheme::CaNoma, a_ca, Some(a_ca.value())),
            (Scheme::Noma, a_noma, Some(a_noma.value())),
            (Scheme::Oma, oma_placeholder_split(), None),
        ] {
            let analytic = outage_breakdown_analytic(&p, a, scheme).p_union;
            let emp = mc
                .as_ref()
                .map(|mc| estimate_outage(&p, a, scheme, mc))
                .transpose()?;
            rows.push(row(
                scheme.name(),
                a_col,
                snr_db,
                cfg,
                Some(analytic),
                emp.as_ref().zip(mc.as_ref()),
            ));
        }
    }
    Ok(rows)
}

pub const AMIN_CLOSED: &str = "CA-NOMA/closed";
pub const AMIN_CLOSED_UNCLAMPED: &str = "CA-NOMA/closed-unclamped";
pub const AMIN_NUMERIC: &str = "CA-NOMA/numeric";

/// Closed-form and numeric `a_min` per SNR, each with its CA-NOMA outage.
pub fn cmd_sweep_amin(cfg: &RunConfig) -> Result<Vec<SweepRow>, HarnessError> {
    let mut rows = Vec::with_capacity(3 * cfg.grid.points);
    for (i, snr_db) in cfg.grid.values().into_iter().enumerate() {
        let at = |e: Error| e.at_point(i);
        let p = SystemParams::from_db(snr_db, cfg.beta, cfg.rate).map_err(at)?;
        let closed = a_min_closed_form(&p).map_err(at)?;
        let unclamped = PowerSplit::new(closed.unclamped).map_err(at)?;
        let numeric = a_min_numeric(&p, DEFAULT_TOL).map_err(at)?;
        let mc = mc_config(cfg, point_seed(cfg.seed, i))?;
        for (label, a) in [
            (AMIN_CLOSED, closed.a),
            (AMIN_CLOSED_UNCLAMPED, unclamped),
            (AMIN_NUMERIC, numeric),
        ] {
            let analytic = union_outage_ca_noma(&p, a);
            let emp = mc
                .as_ref()
                .map(|mc| estimate_outage(&p, a, Scheme::CaNoma, mc))
                .transpose()?;
            rows.push(row(
                label,
                Some(a.value()),
                snr_db,
                cfg,
                Some(analytic),
                emp.as_ref().zip(mc.as_ref()),
            ));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(experiment: Experiment) -> RunConfig {
        let mut cfg = RunConfig::defaults(experiment);
        cfg.samples = 2_000;
        cfg
    }

    #[test]
    fn eval_reports_point_value() {
        let out = run(&quick(Experiment::Eval)).unwrap();
        assert_eq!(out.rows.len(), 1);
        let r = &out.rows[0];
        assert!((r.p_analytic.unwrap() - 0.039_688).abs() < 1e-6);
        assert_eq!(r.seed, Some(DEFAULT_SEED));
        let report = out.report.unwrap();
        assert!(report.contains("b21 = 0.15"), "{report}");
        assert!(report.contains("feasible"));
    }

    #[test]
    fn eval_flags_infeasible_split() {
        let mut cfg = quick(Experiment::Eval);
        cfg.a = 0.3;
        let out = run(&cfg).unwrap();
        assert_eq!(out.rows[0].p_analytic, Some(1.0));
        assert_eq!(out.rows[0].p_empirical, Some(1.0));
        assert!(out.report.unwrap().contains("SIC infeasible"));
    }

    #[test]
    fn eval_domain_error() {
        let mut cfg = quick(Experiment::Eval);
        cfg.a = 1.2;
        let err = run(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        cfg.a = 0.2;
        cfg.beta = -1.0;
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn eval_without_samples_is_analytic_only() {
        let mut cfg = quick(Experiment::Eval);
        cfg.samples = 0;
        cfg.scheme = Scheme::Oma;
        let out = run(&cfg).unwrap();
        let r = &out.rows[0];
        assert_eq!(r.a, None);
        assert_eq!(r.p_empirical, None);
        assert_eq!(r.seed, None);
        assert!((r.p_analytic.unwrap() - 0.139_292).abs() < 1e-6);
    }

    #[test]
    fn sweep_row_seed_reproduces_via_eval() {
        let mut cfg = quick(Experiment::SweepA);
        cfg.grid = GridSpec {
            start: 0.1,
            stop: 0.2,
            points: 3,
        };
        let rows = run(&cfg).unwrap().rows;
        let r = &rows[2];
        let mut e = quick(Experiment::Eval);
        e.a = r.a.unwrap();
        e.seed = r.seed.unwrap();
        let again = run(&e).unwrap().rows.remove(0);
        assert_eq!(again.p_empirical, r.p_empirical);
    }

    #[test]
    fn sweep_snr_emits_three_schemes_per_point() {
        let mut cfg = quick(Experiment::SweepSnr);
        cfg.grid = GridSpec {
            start: 10.0,
            stop: 30.0,
            points: 3,
        };
        let rows = run(&cfg).unwrap().rows;
        assert_eq!(rows.len(), 9);
        let names: Vec<_> = rows[..3].iter().map(|r| r.scheme.as_str()).collect();
        assert_eq!(names, ["CA-NOMA", "NOMA", "OMA"]);
        assert_eq!(rows[2].a, None);
        // 20 dB OMA row
        assert!((rows[5].p_analytic.unwrap() - 0.139_292).abs() < 1e-6);
    }

    #[test]
    fn sweep_amin_labels() {
        let mut cfg = quick(Experiment::SweepAmin);
        cfg.samples = 0;
        let rows = run(&cfg).unwrap().rows;
        assert_eq!(rows.len(), 3 * 81);
        assert_eq!(rows[0].scheme, AMIN_CLOSED);
        assert_eq!(rows[1].scheme, AMIN_CLOSED_UNCLAMPED);
        assert_eq!(rows[2].scheme, AMIN_NUMERIC);
    }
}
