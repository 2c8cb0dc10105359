//! Sweep result rows and their CSV/JSON encodings.
//!
//! CSV header, in order:
//! `scheme,a,snr_db,beta,rate_bps_hz,p_analytic,p_empirical,se,n_samples,seed`.
//! Floats carry 9 significant digits; empty cells mean "not applicable".
//! JSON uses the same field names with `null` for missing values.

use serde::{Deserialize, Serialize};

use super::HarnessError;

pub const CSV_HEADER: [&str; 10] = [
    "scheme",
    "a",
    "snr_db",
    "beta",
    "rate_bps_hz",
    "p_analytic",
    "p_empirical",
    "se",
    "n_samples",
    "seed",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// `CA-NOMA`, `NOMA`, `OMA`, or a `CA-NOMA/<variant>` label in a_min sweeps.
    pub scheme: String,
    pub a: Option<f64>,
    pub snr_db: f64,
    pub beta: f64,
    pub rate_bps_hz: f64,
    pub p_analytic: Option<f64>,
    pub p_empirical: Option<f64>,
    pub se: Option<f64>,
    pub n_samples: Option<u64>,
    pub seed: Option<u64>,
}

impl SweepRow {
    /// The row as it reads back after serialization.
    pub fn quantized(&self) -> Self {
        let q = |x: Option<f64>| x.map(quantize);
        Self {
            scheme: self.scheme.clone(),
            a: q(self.a),
            snr_db: quantize(self.snr_db),
            beta: quantize(self.beta),
            rate_bps_hz: quantize(self.rate_bps_hz),
            p_analytic: q(self.p_analytic),
            p_empirical: q(self.p_empirical),
            se: q(self.se),
            n_samples: self.n_samples,
            seed: self.seed,
        }
    }
}

/// Rounds to 9 significant decimal digits.
pub fn quantize(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.8e}")
        .parse()
        .expect("scientific notation parses")
}

/// Formats with 9 significant digits in the style of C's `%.9g`.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt_f(x: Option<f64>) -> String {
    x.map(format_sig9).unwrap_or_default()
}

fn opt_u(x: Option<u64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_csv(rows: &[SweepRow]) -> Result<String, HarnessError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(HarnessError::csv)?;
    for r in rows {
        w.write_record([
            r.scheme.clone(),
            opt_f(r.a),
            format_sig9(r.snr_db),
            format_sig9(r.beta),
            format_sig9(r.rate_bps_hz),
            opt_f(r.p_analytic),
            opt_f(r.p_empirical),
            opt_f(r.se),
            opt_u(r.n_samples),
            opt_u(r.seed),
        ])
        .map_err(HarnessError::csv)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| HarnessError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cell<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    i: usize,
    line: usize,
) -> Result<Option<T>, HarnessError> {
    let raw = rec.get(i).unwrap_or("");
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse().map(Some).map_err(|_| {
        HarnessError::Parse(format!(
            "row {line}: bad value '{raw}' in column {}",
            CSV_HEADER[i]
        ))
    })
}

fn required<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    i: usize,
    line: usize,
) -> Result<T, HarnessError> {
    cell(rec, i, line)?.ok_or_else(|| {
        HarnessError::Parse(format!("row {line}: column {} is empty", CSV_HEADER[i]))
    })
}

pub fn read_csv(text: &str) -> Result<Vec<SweepRow>, HarnessError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(HarnessError::csv)?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(HarnessError::Parse(format!(
            "unexpected CSV header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.records()
        .enumerate()
        .map(|(line, rec)| {
            let rec = rec.map_err(HarnessError::csv)?;
            Ok(SweepRow {
                scheme: required(&rec, 0, line)?,
                a: cell(&rec, 1, line)?,
                snr_db: required(&rec, 2, line)?,
                beta: required(&rec, 3, line)?,
                rate_bps_hz: required(&rec, 4, line)?,
                p_analytic: cell(&rec, 5, line)?,
                p_empirical: cell(&rec, 6, line)?,
                se: cell(&rec, 7, line)?,
                n_samples: cell(&rec, 8, line)?,
                seed: cell(&rec, 9, line)?,
            })
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct JsonDocument<C> {
    pub tool_version: String,
    pub config: C,
    pub rows: Vec<SweepRow>,
}

pub fn write_json<C: Serialize>(config: &C, rows: &[SweepRow]) -> Result<String, HarnessError> {
    let doc = JsonDocument {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config,
        rows: rows.iter().map(SweepRow::quantized).collect(),
    };
    let mut text =
        serde_json::to_string_pretty(&doc).map_err(|e| HarnessError::Parse(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn read_json(text: &str) -> Result<JsonDocument<serde_json::Value>, HarnessError> {
    serde_json::from_str(text).map_err(|e| HarnessError::Parse(e.to_string()))
}
