use crate::arith::{AlphaEnclosure, RadicandSpec};
use crate::error::{Error, Result};

/// Adaptive precision schedule: start at `initial_bits`, double on
/// [`Error::InsufficientPrecision`], give up past `max_bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub initial_bits: u64,
    pub max_bits: u64,
}

pub const DEFAULT_INITIAL_BITS: u64 = 64;
pub const DEFAULT_MAX_BITS: u64 = 1 << 20;

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { initial_bits: DEFAULT_INITIAL_BITS, max_bits: DEFAULT_MAX_BITS }
    }
}

impl PrecisionPolicy {
    pub fn with_max_bits(max_bits: u64) -> Self {
        PrecisionPolicy { max_bits, ..Self::default() }
    }

    /// Precisions tried, in order.
    pub fn schedule(&self) -> impl Iterator<Item = u64> + '_ {
        std::iter::successors(Some(self.initial_bits.max(1)), |b| b.checked_mul(2))
            .take_while(move |b| *b <= self.max_bits)
    }

    /// Runs `attempt` at increasing precision until it returns something
    /// other than [`Error::InsufficientPrecision`].
    pub fn refine<T>(&self, mut attempt: impl FnMut(u64) -> Result<T>) -> Result<T> {
        for bits in self.schedule() {
            match attempt(bits) {
                Err(Error::InsufficientPrecision { .. }) => continue,
                other => return other,
            }
        }
        Err(Error::PrecisionCeiling { max_bits: self.max_bits })
    }

    /// [`refine`](Self::refine) with a fresh base-2 enclosure of alpha per attempt.
    pub fn refine_alpha<T>(
        &self,
        spec: RadicandSpec,
        mut attempt: impl FnMut(&AlphaEnclosure) -> Result<T>,
    ) -> Result<T> {
        self.refine(|bits| attempt(&AlphaEnclosure::with_bits(spec, bits)))
    }
}
