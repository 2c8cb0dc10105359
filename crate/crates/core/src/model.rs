//! System parameters, channel pairs, per-user capacities and the channel-gain
//! thresholds below which each decoding step is in outage.
//!
//! SNR is linear everywhere inside the crate. Use [`SystemParams::from_db`]
//! at the boundary when working with plot axes in dB.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Transmit SNR `xi` (linear), mean channel power `beta` and QoS rate `R0` in bps/Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    snr: f64,
    beta: f64,
    rate: f64,
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

impl SystemParams {
    pub fn new(snr: f64, beta: f64, rate: f64) -> Result<Self> {
        Ok(Self {
            snr: positive("snr", snr)?,
            beta: positive("beta", beta)?,
            rate: positive("rate", rate)?,
        })
    }

    /// Same as [`SystemParams::new`] with the SNR given in dB.
    pub fn from_db(snr_db: f64, beta: f64, rate: f64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::InvalidParameter {
                name: "snr_db",
                value: snr_db,
            });
        }
        Self::new(db_to_linear(snr_db), beta, rate)
    }

    pub fn snr(&self) -> f64 {
        self.snr
    }

    pub fn snr_db(&self) -> f64 {
        linear_to_db(self.snr)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// `2^R0`.
    pub fn rate_pow(&self) -> f64 {
        self.rate.exp2()
    }

    /// `2^R0 - 1`, the SNR a user must see to support `R0`.
    pub fn rate_factor(&self) -> f64 {
        self.rate.exp2() - 1.0
    }

    /// `1 / (1 + 2^R0)`: the split at which the user-2 and SIC thresholds
    /// coincide. Outage minimization is confined to `(0, cap]`.
    pub fn balanced_split(&self) -> f64 {
        1.0 / (1.0 + self.rate_pow())
    }

    /// `2^-R0`: at or above this split SIC at user-2 always fails.
    pub fn sic_limit(&self) -> f64 {
        (-self.rate).exp2()
    }

    /// Gain needed by either OMA user, `(4^R0 - 1) / xi`.
    pub fn oma_threshold(&self) -> f64 {
        // 4^R0 - 1 = (2^R0 - 1)(2^R0 + 1), kept factored for accuracy at small R0
        self.rate_factor() * (self.rate_pow() + 1.0) / self.snr
    }
}

/// Fraction `a` of the transmit power carried by user-2's signal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PowerSplit(f64);

impl PowerSplit {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 0.0 && a < 1.0 {
            Ok(Self(a))
        } else {
            Err(Error::InvalidPowerSplit(a))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub(crate) fn unchecked(a: f64) -> Self {
        debug_assert!(a > 0.0 && a < 1.0);
        Self(a)
    }
}

impl TryFrom<f64> for PowerSplit {
    type Error = Error;

    fn try_from(a: f64) -> Result<Self> {
        Self::new(a)
    }
}

impl From<PowerSplit> for f64 {
    fn from(a: PowerSplit) -> f64 {
        a.0
    }
}

/// Squared channel gains of the weak (`g1`) and strong (`g2`) user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelPair {
    g1: f64,
    g2: f64,
}

impl ChannelPair {
    pub fn new(g1: f64, g2: f64) -> Result<Self> {
        let g1 = check_gain(g1)?;
        let g2 = check_gain(g2)?;
        if g1 > g2 {
            return Err(Error::UnorderedPair { g1, g2 });
        }
        Ok(Self { g1, g2 })
    }

    /// Orders two gains so that the weaker one becomes user-1.
    pub fn from_unordered(x: f64, y: f64) -> Result<Self> {
        let (x, y) = (check_gain(x)?, check_gain(y)?);
        Ok(Self {
            g1: x.min(y),
            g2: x.max(y),
        })
    }

    pub(crate) fn sorted_unchecked(x: f64, y: f64) -> Self {
        if x <= y {
            Self { g1: x, g2: y }
        } else {
            Self { g1: y, g2: x }
        }
    }

    pub fn g1(&self) -> f64 {
        self.g1
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }
}

fn check_gain(g: f64) -> Result<f64> {
    if g.is_finite() && g >= 0.0 {
        Ok(g)
    } else {
        Err(Error::InvalidGain(g))
    }
}

/// Minimum channel gain for a decoding step, or certain outage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Gain(f64),
    /// No finite gain suffices; the step is in outage for every channel.
    Infeasible,
}

impl Threshold {
    pub fn gain(self) -> Option<f64> {
        match self {
            Threshold::Gain(g) => Some(g),
            Threshold::Infeasible => None,
        }
    }

    pub fn is_feasible(self) -> bool {
        matches!(self, Threshold::Gain(_))
    }

    /// `true` if a channel with gain `g` is below the threshold.
    pub fn in_outage(self, g: f64) -> bool {
        match self {
            Threshold::Gain(t) => g < t,
            Threshold::Infeasible => true,
        }
    }
}

// Capacities (bps/Hz). The `raw_*` kernels skip gain validation and are used
// by the Monte Carlo loop on already-validated draws.

pub(crate) fn raw_oma_capacity(p: &SystemParams, g: f64) -> f64 {
    0.5 * (p.snr * g).ln_1p() / std::f64::consts::LN_2
}

pub(crate) fn raw_interference_free_capacity(p: &SystemParams, share: f64, g: f64) -> f64 {
    (share * p.snr * g).ln_1p() / std::f64::consts::LN_2
}

pub(crate) fn raw_sic_capacity(p: &SystemParams, a: PowerSplit, g: f64) -> f64 {
    let a = a.value();
    let sg = p.snr * g;
    ((1.0 - a) * sg / (a * sg + 1.0)).ln_1p() / std::f64::consts::LN_2
}

/// OMA capacity of a user on a half slot at full SNR: `0.5 log2(1 + xi g)`.
pub fn oma_capacity(p: &SystemParams, g: f64) -> Result<f64> {
    Ok(raw_oma_capacity(p, check_gain(g)?))
}

/// User-1 capacity after cache-aided cancellation of user-2's signal.
pub fn ca_noma_capacity_user1(p: &SystemParams, a: PowerSplit, g1: f64) -> Result<f64> {
    Ok(raw_interference_free_capacity(
        p,
        1.0 - a.value(),
        check_gain(g1)?,
    ))
}

/// User-2 capacity after SIC: `log2(1 + a xi g2)`.
pub fn ca_noma_capacity_user2(p: &SystemParams, a: PowerSplit, g2: f64) -> Result<f64> {
    Ok(raw_interference_free_capacity(
        p,
        a.value(),
        check_gain(g2)?,
    ))
}

/// Rate at which a receiver with gain `g` can decode user-1's signal while
/// user-2's signal is still present as interference.
///
/// With `g = g2` this is the SIC step at user-2. With `g = g1` it is user-1's
/// own capacity in regular NOMA, where no cache is available.
pub fn sic_capacity(p: &SystemParams, a: PowerSplit, g: f64) -> Result<f64> {
    Ok(raw_sic_capacity(p, a, check_gain(g)?))
}

/// User-1 outage threshold in CA-NOMA: `(2^R0 - 1) / ((1 - a) xi)`.
pub fn threshold_b1(p: &SystemParams, a: PowerSplit) -> f64 {
    p.rate_factor() / ((1.0 - a.value()) * p.snr)
}

/// User-2 outage threshold: `(2^R0 - 1) / (a xi)`.
pub fn threshold_b2(p: &SystemParams, a: PowerSplit) -> f64 {
    p.rate_factor() / (a.value() * p.snr)
}

/// Threshold for decoding user-1's signal under user-2 interference:
/// `(2^R0 - 1) / (xi (1 - a 2^R0))`, infeasible once `a >= 2^-R0`.
pub fn threshold_b21(p: &SystemParams, a: PowerSplit) -> Threshold {
    let margin = 1.0 - a.value() * p.rate_pow();
    if margin <= 0.0 {
        Threshold::Infeasible
    } else {
        Threshold::Gain(p.rate_factor() / (p.snr * margin))
    }
}

/// Where a power split sits relative to the two structural boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    /// `a <= 1/(1+2^R0)`: user-2's own threshold dominates the SIC threshold.
    Balanced,
    /// `1/(1+2^R0) < a < 2^-R0`: SIC is possible but its threshold dominates.
    SicLimited,
    /// `a >= 2^-R0`: SIC at user-2 never succeeds.
    SicInfeasible,
}

impl Feasibility {
    pub fn classify(p: &SystemParams, a: PowerSplit) -> Self {
        if !threshold_b21(p, a).is_feasible() {
            Feasibility::SicInfeasible
        } else if a.value() <= p.balanced_split() {
            Feasibility::Balanced
        } else {
            Feasibility::SicLimited
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Feasibility::Balanced => {
                "feasible: a <= 1/(1+2^R0), user-2 rate threshold dominates SIC"
            }
            Feasibility::SicLimited => {
                "SIC-limited: 1/(1+2^R0) < a < 2^-R0, SIC threshold dominates user-2"
            }
            Feasibility::SicInfeasible => "SIC infeasible: a >= 2^-R0, outage is certain",
        }
    }
}
