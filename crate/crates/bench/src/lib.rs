//! Shared inputs for the criterion benchmarks in `benches/`.

use bvpcf_core::RadicandSpec;

/// `(k, m)` pairs covering small and large degree.
pub const CASES: [(u64, u32); 4] = [(2, 3), (5, 3), (2, 5), (50, 10)];

pub fn spec(k: u64, m: u32) -> RadicandSpec {
    RadicandSpec::new(k, m).expect("benchmark radicands are valid")
}
