use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `k` is a perfect `power`-th power for a prime `power` dividing `m`, so
    /// `k^(1/m)` is rational or has degree below `m`.
    #[error("k = {k} is a perfect power with exponent {power}, so k^(1/{m}) does not have degree {m}")]
    PerfectPower { k: u64, m: u32, power: u32 },

    #[error("root degree must be at least 2, got {0}")]
    InvalidDegree(u32),

    #[error("operation requires root degree 3, got {0}")]
    WrongDegree(u32),

    /// An enclosure could not be decided at the current precision. Callers
    /// running under a [`PrecisionPolicy`](crate::PrecisionPolicy) retry at
    /// twice the precision.
    #[error("enclosure undecided at {bits} bits of precision")]
    InsufficientPrecision { bits: u64 },

    #[error("precision ceiling of {max_bits} bits exceeded")]
    PrecisionCeiling { max_bits: u64 },

    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,

    #[error("the two enclosures of R_{n} are disjoint")]
    InconsistentEnclosures { n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
