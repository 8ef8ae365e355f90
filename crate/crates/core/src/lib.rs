//! Certified continued fraction expansions of `alpha = k^(1/m)` and the
//! Bombieri-van der Poorten description of their partial quotients.
//!
//! * [`arith`]: exact integer/rational kernel and interval enclosures.
//! * [`cf`]: expansions, convergents, complete quotients, exact quotient oracle.
//! * [`bvp`]: leading terms, remainders, the floor-formula predictor,
//!   theorem verification and scans.

pub mod arith;
pub mod bvp;
pub mod cf;
mod error;
mod precision;

pub use arith::{
    alpha_floor_scaled, int_nth_root, interval_arith, sign_linear_in_alpha, validate_spec, AlphaEnclosure, IntervalOp,
    RadicandSpec, Rational, RationalInterval,
};
pub use bvp::{
    algebraic_distance, bvp_terms, certified_terms, cubic_correction, general_correction, leading_term, predict_next,
    remainder, scan, verify_theorems, BvpTerms, IndexCheck, Observed, PredictionOutcome, Quantity, ScanCell,
    ScanOptions, ScanResult, Thresholds, Verification, VerificationSummary, ViolationRecord,
};
pub use cf::{
    convergent_step, expand, expand_exact_oracle, theta_enclosure, verify_quotient, Convergent, Expansion, Side,
    ThetaEnclosure,
};
pub use error::{Error, Result};
pub use precision::{PrecisionPolicy, DEFAULT_INITIAL_BITS, DEFAULT_MAX_BITS};
