//! Closed-form union-outage probabilities.
//!
//! A transmission fails if any required rate condition misses `R0`: user-1
//! decoding its own signal, user-2 decoding its own signal, or user-2
//! decoding user-1's signal for SIC. Each condition is a lower threshold on
//! one ordered gain, so the union outage is `1 - Pr{g1 >= t1, g2 >= t2}` with
//! `t2` the larger of the two user-2 thresholds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{
    threshold_b1, threshold_b2, threshold_b21, PowerSplit, SystemParams, Threshold,
};
use crate::sampler::{raw_joint_failure, strong_cdf, weak_cdf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// User-1 cancels user-2's signal from its cache; user-2 uses SIC.
    #[serde(rename = "CA-NOMA")]
    CaNoma,
    /// User-1 decodes under user-2 interference; user-2 uses SIC.
    #[serde(rename = "NOMA")]
    Noma,
    /// Equal half slots at full SNR.
    #[serde(rename = "OMA")]
    Oma,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::CaNoma, Scheme::Noma, Scheme::Oma];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::CaNoma => "CA-NOMA",
            Scheme::Noma => "NOMA",
            Scheme::Oma => "OMA",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownScheme(pub String);

impl fmt::Display for UnknownScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown scheme '{}' (expected CA-NOMA, NOMA or OMA)",
            self.0
        )
    }
}

impl std::error::Error for UnknownScheme {}

impl FromStr for Scheme {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "ca-noma" | "canoma" => Ok(Scheme::CaNoma),
            "noma" => Ok(Scheme::Noma),
            "oma" => Ok(Scheme::Oma),
            _ => Err(UnknownScheme(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Analytic,
    Empirical,
}

/// Probabilities of the three outage events and of their union.
///
/// `p_a1` is user-1 missing `R0` on its own signal, `p_a2` user-2 missing
/// `R0`, `p_a21` user-2 failing to decode user-1's signal. OMA has no SIC
/// step, so its `p_a21` is always zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageBreakdown {
    pub p_a1: f64,
    pub p_a2: f64,
    pub p_a21: f64,
    pub p_union: f64,
    pub source: Source,
    /// Standard error of `p_union`; zero for analytic values.
    pub se_union: f64,
}

/// Union outage of CA-NOMA at power split `a`.
///
/// Up to `a = 1/(1+2^R0)` this is the closed form
/// `1 + e^{-2(2^R0-1)/(a beta xi)} - 2 e^{-(2^R0-1)/(a(1-a) beta xi)}`.
/// Between that point and `2^-R0` the SIC threshold replaces user-2's own
/// threshold. From `2^-R0` on, SIC never succeeds and the result is 1.
pub fn union_outage_ca_noma(p: &SystemParams, a: PowerSplit) -> f64 {
    let b21 = match threshold_b21(p, a) {
        Threshold::Infeasible => return 1.0,
        Threshold::Gain(t) => t,
    };
    if a.value() <= p.balanced_split() {
        let av = a.value();
        let scale = p.rate_factor() / (p.beta() * p.snr());
        // 1 + e^{-x} - 2 e^{-y} written as expm1(-x) - 2 expm1(-y)
        let x = 2.0 * scale / av;
        let y = scale / (av * (1.0 - av));
        (-x).exp_m1() - 2.0 * (-y).exp_m1()
    } else {
        let b1 = threshold_b1(p, a);
        let b2 = threshold_b2(p, a);
        raw_joint_failure(p.beta(), b1, b2.max(b21))
    }
}

/// Union outage of regular NOMA at power split `a`.
///
/// User-1 has no cache and decodes its signal under user-2 interference, so
/// its threshold has the same form as the SIC threshold, evaluated on `g1`.
pub fn union_outage_noma(p: &SystemParams, a: PowerSplit) -> f64 {
    match threshold_b21(p, a) {
        Threshold::Infeasible => 1.0,
        Threshold::Gain(b21) => {
            let b2 = threshold_b2(p, a);
            raw_joint_failure(p.beta(), b21, b2.max(b21))
        }
    }
}

/// Union outage of two-slot OMA: `1 - e^{-2(4^R0-1)/(beta xi)}`.
pub fn union_outage_oma(p: &SystemParams) -> f64 {
    weak_cdf(p.beta(), p.oma_threshold())
}

fn marginal_g1(p: &SystemParams, t: Threshold) -> f64 {
    match t {
        Threshold::Gain(t) => weak_cdf(p.beta(), t),
        Threshold::Infeasible => 1.0,
    }
}

fn marginal_g2(p: &SystemParams, t: Threshold) -> f64 {
    match t {
        Threshold::Gain(t) => strong_cdf(p.beta(), t),
        Threshold::Infeasible => 1.0,
    }
}

/// Per-event and union outage probabilities in closed form.
///
/// `a` is ignored for [`Scheme::Oma`].
pub fn outage_breakdown_analytic(
    p: &SystemParams,
    a: PowerSplit,
    scheme: Scheme,
) -> OutageBreakdown {
    let (p_a1, p_a2, p_a21, p_union) = match scheme {
        Scheme::CaNoma => {
            let b21 = threshold_b21(p, a);
            (
                marginal_g1(p, Threshold::Gain(threshold_b1(p, a))),
                marginal_g2(p, Threshold::Gain(threshold_b2(p, a))),
                marginal_g2(p, b21),
                union_outage_ca_noma(p, a),
            )
        }
        Scheme::Noma => {
            let b21 = threshold_b21(p, a);
            (
                marginal_g1(p, b21),
                marginal_g2(p, Threshold::Gain(threshold_b2(p, a))),
                marginal_g2(p, b21),
                union_outage_noma(p, a),
            )
        }
        Scheme::Oma => {
            let t = Threshold::Gain(p.oma_threshold());
            (
                marginal_g1(p, t),
                marginal_g2(p, t),
                0.0,
                union_outage_oma(p),
            )
        }
    };
    OutageBreakdown {
        p_a1,
        p_a2,
        p_a21,
        p_union,
        source: Source::Analytic,
        se_union: 0.0,
    }
}
