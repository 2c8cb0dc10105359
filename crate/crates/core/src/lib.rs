//! Outage analysis for two-user cache-aided NOMA (CA-NOMA) downlinks.
//!
//! The weak user (user-1) holds a cached copy of the strong user's (user-2)
//! content, reconstructs user-2's signal and subtracts it, so both users see
//! interference-free channels. The strong user still has to decode user-1's
//! signal under interference before it can run SIC, and that constraint is
//! what bounds the usable power split.
//!
//! Layout:
//!
//! - [`model`]: parameters, channel pairs, capacities and outage thresholds.
//! - [`sampler`]: ordered Rayleigh channel pairs and their joint survival function.
//! - [`outage`]: closed-form union-outage probabilities for CA-NOMA, NOMA and OMA.
//! - [`optimizer`]: the cubic closed-form outage-minimizing power split and
//!   numerical minimizers.
//! - [`montecarlo`]: seeded, stream-parallel empirical outage estimates.
//! - [`harness`]: experiment runner, config handling and CSV/JSON row output.

pub mod error;
pub mod harness;
pub mod model;
pub mod montecarlo;
pub mod optimizer;
pub mod outage;
pub mod sampler;

pub use error::{Error, Result};
pub use model::{ChannelPair, PowerSplit, SystemParams, Threshold};
pub use montecarlo::{estimate_curve, estimate_outage, CurveGrid, McConfig};
pub use optimizer::{
    a_min_closed_form, a_min_numeric, a_star_noma_numeric, ClosedFormMin, CubicIntermediates,
    DEFAULT_TOL,
};
pub use outage::{
    outage_breakdown_analytic, union_outage_ca_noma, union_outage_noma, union_outage_oma,
    OutageBreakdown, Scheme, Source,
};
pub use sampler::{joint_survival, ChannelSampler, SamplerSeed};
