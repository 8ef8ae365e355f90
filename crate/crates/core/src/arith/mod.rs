//! Exact integer and rational kernel.
//!
//! Every decision about `alpha = k^(1/m)` made anywhere in the crate bottoms
//! out in integer comparisons performed here. Real-valued quantities that
//! depend on `alpha` are carried as [`RationalInterval`] enclosures whose
//! endpoints are exact rationals.

mod interval;
mod radicand;

pub use interval::{interval_arith, IntervalOp, RationalInterval};
pub use radicand::{alpha_floor_scaled, sign_linear_in_alpha, validate_spec, AlphaEnclosure, RadicandSpec};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Normalized arbitrary-precision rational: reduced, positive denominator.
pub type Rational = BigRational;

/// Largest `r` with `r^m <= x`.
///
/// `m = 0` is treated as `m = 1`.
pub fn int_nth_root(x: &BigUint, m: u32) -> BigUint {
    match m {
        0 | 1 => x.clone(),
        _ => x.nth_root(m),
    }
}

/// `floor(x)` as an integer.
pub fn rational_floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn rational_ceil(x: &Rational) -> BigInt {
    -(-x.numer()).div_floor(x.denom())
}

#[cfg(test)]
pub(crate) fn int(x: impl Into<BigInt>) -> Rational {
    Rational::from_integer(x.into())
}

#[cfg(test)]
pub(crate) fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Primes dividing `m`, ascending.
pub(crate) fn prime_divisors(mut m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub(crate) fn signum(x: &BigInt) -> std::cmp::Ordering {
    if x.is_zero() {
        std::cmp::Ordering::Equal
    } else if x.is_positive() {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Less
    }
}

pub(crate) fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}
