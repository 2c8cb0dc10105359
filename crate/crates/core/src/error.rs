use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Domain validation failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be finite and positive, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("power split must lie in the open interval (0, 1), got {0}")]
    InvalidPowerSplit(f64),

    #[error("channel gain must be finite and non-negative, got {0}")]
    InvalidGain(f64),

    #[error("channel pair must satisfy g1 <= g2, got g1={g1}, g2={g2}")]
    UnorderedPair { g1: f64, g2: f64 },

    #[error("A0 = {0} exceeds 27/4: SNR too low for the cubic power-split approximation")]
    OutOfModel(f64),

    #[error("tolerance must be finite and positive, got {0}")]
    InvalidTolerance(f64),

    #[error("Monte Carlo sample count must be at least 1")]
    NoSamples,

    #[error("Monte Carlo stream count must be at least 1")]
    NoStreams,

    #[error("grid must contain at least one point")]
    EmptyGrid,

    #[error("grid point {index}: {source}")]
    GridPoint { index: usize, source: Box<Error> },
}

impl Error {
    pub(crate) fn at_point(self, index: usize) -> Self {
        Error::GridPoint {
            index,
            source: Box::new(self),
        }
    }
}
