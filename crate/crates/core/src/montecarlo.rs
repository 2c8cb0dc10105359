//! Empirical outage estimates over sampled channel pairs.
//!
//! Each draw is judged by comparing capacities against `R0`, never through
//! the gain thresholds, so the estimates check the threshold algebra
//! independently.
//!
//! `n_samples` draws are split into `n_streams` contiguous slices (remainder to
//! the lowest slices). Slice `k` gets its own sampler on the same keystream,
//! seeked to the slice start, so counts do not depend on `n_streams` or on
//! thread scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    raw_interference_free_capacity, raw_oma_capacity, raw_sic_capacity, threshold_b1, threshold_b2,
    threshold_b21, ChannelPair, PowerSplit, SystemParams, Threshold,
};
use crate::outage::{OutageBreakdown, Scheme, Source};
use crate::sampler::{ChannelSampler, SamplerSeed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_samples: u64,
    pub master_seed: u64,
    pub n_streams: u32,
}

impl McConfig {
    pub fn new(n_samples: u64, master_seed: u64, n_streams: u32) -> Result<Self> {
        let cfg = Self {
            n_samples,
            master_seed,
            n_streams,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::NoSamples);
        }
        if self.n_streams == 0 {
            return Err(Error::NoStreams);
        }
        Ok(())
    }

    /// `(start, len)` of each stream's slice of the sample index range.
    pub fn slices(&self) -> Vec<(u64, u64)> {
        let k = self.n_streams as u64;
        let base = self.n_samples / k;
        let extra = self.n_samples % k;
        let mut start = 0;
        (0..k)
            .map(|i| {
                let len = base + u64::from(i < extra);
                let slice = (start, len);
                start += len;
                slice
            })
            .collect()
    }

    fn with_seed(&self, master_seed: u64) -> Self {
        Self {
            master_seed,
            ..*self
        }
    }
}

/// Which outage events a single draw triggers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DrawEvents {
    pub a1: bool,
    pub a2: bool,
    pub a21: bool,
}

impl DrawEvents {
    pub fn union(&self) -> bool {
        self.a1 || self.a2 || self.a21
    }
}

/// Events of one draw judged by capacity: `C < R0`.
pub fn capacity_events(
    p: &SystemParams,
    a: PowerSplit,
    scheme: Scheme,
    pair: &ChannelPair,
) -> DrawEvents {
    let r0 = p.rate();
    let (g1, g2) = (pair.g1(), pair.g2());
    match scheme {
        Scheme::CaNoma => DrawEvents {
            a1: raw_interference_free_capacity(p, 1.0 - a.value(), g1) < r0,
            a2: raw_interference_free_capacity(p, a.value(), g2) < r0,
            a21: raw_sic_capacity(p, a, g2) < r0,
        },
        Scheme::Noma => DrawEvents {
            a1: raw_sic_capacity(p, a, g1) < r0,
            a2: raw_interference_free_capacity(p, a.value(), g2) < r0,
            a21: raw_sic_capacity(p, a, g2) < r0,
        },
        Scheme::Oma => DrawEvents {
            a1: raw_oma_capacity(p, g1) < r0,
            a2: raw_oma_capacity(p, g2) < r0,
            a21: false,
        },
    }
}

/// Events of one draw judged by the gain thresholds.
pub fn threshold_events(
    p: &SystemParams,
    a: PowerSplit,
    scheme: Scheme,
    pair: &ChannelPair,
) -> DrawEvents {
    let (g1, g2) = (pair.g1(), pair.g2());
    match scheme {
        Scheme::CaNoma => DrawEvents {
            a1: g1 < threshold_b1(p, a),
            a2: g2 < threshold_b2(p, a),
            a21: threshold_b21(p, a).in_outage(g2),
        },
        Scheme::Noma => DrawEvents {
            a1: threshold_b21(p, a).in_outage(g1),
            a2: g2 < threshold_b2(p, a),
            a21: threshold_b21(p, a).in_outage(g2),
        },
        Scheme::Oma => {
            let t = Threshold::Gain(p.oma_threshold());
            DrawEvents {
                a1: t.in_outage(g1),
                a2: t.in_outage(g2),
                a21: false,
            }
        }
    }
}

/// Raw event counts over a batch of draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EventCounts {
    pub n: u64,
    pub a1: u64,
    pub a2: u64,
    pub a21: u64,
    pub union: u64,
}

impl EventCounts {
    fn record(&mut self, e: DrawEvents) {
        self.n += 1;
        self.a1 += u64::from(e.a1);
        self.a2 += u64::from(e.a2);
        self.a21 += u64::from(e.a21);
        self.union += u64::from(e.union());
    }

    fn merge(self, other: Self) -> Self {
        Self {
            n: self.n + other.n,
            a1: self.a1 + other.a1,
            a2: self.a2 + other.a2,
            a21: self.a21 + other.a21,
            union: self.union + other.union,
        }
    }

    pub fn breakdown(&self) -> OutageBreakdown {
        let n = self.n as f64;
        let p_union = self.union as f64 / n;
        OutageBreakdown {
            p_a1: self.a1 as f64 / n,
            p_a2: self.a2 as f64 / n,
            p_a21: self.a21 as f64 / n,
            p_union,
            source: Source::Empirical,
            se_union: (p_union * (1.0 - p_union) / n).sqrt(),
        }
    }
}

/// Event counts for the draws of `cfg` on the given sampler stream.
pub fn count_events(
    p: &SystemParams,
    a: PowerSplit,
    scheme: Scheme,
    cfg: &McConfig,
    stream_index: u64,
) -> Result<EventCounts> {
    cfg.validate()?;
    let seed = SamplerSeed::new(cfg.master_seed, stream_index);
    let run_slice = |&(start, len): &(u64, u64)| {
        let mut sampler = ChannelSampler::new(p, seed);
        sampler.seek(start);
        let mut counts = EventCounts::default();
        for pair in sampler.take(len as usize) {
            counts.record(capacity_events(p, a, scheme, &pair));
        }
        counts
    };
    let slices = cfg.slices();
    let per_slice: Vec<EventCounts> = if slices.len() == 1 {
        slices.iter().map(run_slice).collect()
    } else {
        slices.par_iter().map(run_slice).collect()
    };
    Ok(per_slice
        .into_iter()
        .fold(EventCounts::default(), EventCounts::merge))
}

/// Empirical outage breakdown from `cfg.n_samples` draws on stream 0 of
/// `cfg.master_seed`.
pub fn estimate_outage(
    p: &SystemParams,
    a: PowerSplit,
    scheme: Scheme,
    cfg: &McConfig,
) -> Result<OutageBreakdown> {
    Ok(count_events(p, a, scheme, cfg, 0)?.breakdown())
}

/// Seed used for grid point `index` of a curve: the first output of stream
/// `index` under `master_seed`.
pub fn point_seed(master_seed: u64, index: usize) -> u64 {
    SamplerSeed::new(master_seed, index as u64).derive_seed()
}

/// The grid a curve is evaluated over. Values are unvalidated; bad points
/// surface as [`Error::GridPoint`].
#[derive(Debug, Clone, PartialEq)]
pub enum CurveGrid<'g> {
    /// Power splits at fixed system parameters.
    PowerSplit {
        params: SystemParams,
        a_values: &'g [f64],
    },
    /// SNR values in dB at a fixed power split.
    SnrDb {
        beta: f64,
        rate: f64,
        a: f64,
        snr_db: &'g [f64],
    },
}

impl CurveGrid<'_> {
    pub fn len(&self) -> usize {
        match self {
            CurveGrid::PowerSplit { a_values, .. } => a_values.len(),
            CurveGrid::SnrDb { snr_db, .. } => snr_db.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, index: usize) -> Result<(SystemParams, PowerSplit)> {
        match *self {
            CurveGrid::PowerSplit { params, a_values } => {
                Ok((params, PowerSplit::new(a_values[index])?))
            }
            CurveGrid::SnrDb {
                beta,
                rate,
                a,
                snr_db,
            } => Ok((
                SystemParams::from_db(snr_db[index], beta, rate)?,
                PowerSplit::new(a)?,
            )),
        }
    }
}

/// One estimate per grid point; point `i` runs on master seed
/// [`point_seed`]`(cfg.master_seed, i)`, so each point is reproducible on
/// its own and independent of evaluation order.
pub fn estimate_curve(
    grid: &CurveGrid<'_>,
    scheme: Scheme,
    cfg: &McConfig,
) -> Result<Vec<OutageBreakdown>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    cfg.validate()?;
    (0..grid.len())
        .map(|i| {
            let (p, a) = grid.point(i).map_err(|e| e.at_point(i))?;
            let point_cfg = cfg.with_seed(point_seed(cfg.master_seed, i));
            estimate_outage(&p, a, scheme, &point_cfg).map_err(|e| e.at_point(i))
        })
        .collect()
}
