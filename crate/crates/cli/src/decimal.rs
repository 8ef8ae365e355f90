//! Decimal rendering of certified values.
//!
//! An enclosure `[lo, hi]` is printed as its midpoint truncated to the
//! largest number of digits `d` with `width * 10^d <= 1`, together with the
//! width rounded up to two significant figures.

use bvpcf_core::{Rational, RationalInterval};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Digits printed for exact values and for enclosures narrower than this.
pub const MAX_DIGITS: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certified {
    pub value: String,
    pub width: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exact {
    pub rational: String,
    pub value: String,
    /// Truncation error bound of `value`; `0` when it is exact.
    pub width: String,
}

pub fn certified(x: &RationalInterval) -> Certified {
    let width = x.width();
    Certified { value: truncated(&x.midpoint(), justified_digits(&width)), width: width_upper(&width) }
}

pub fn exact(x: &Rational) -> Exact {
    let scale = Rational::from_integer(pow10(MAX_DIGITS));
    let width = if (x * &scale).is_integer() { Rational::zero() } else { scale.recip() };
    Exact { rational: rational(x), value: truncated(x, MAX_DIGITS), width: width_upper(&width) }
}

pub fn rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn pow10(d: u32) -> BigInt {
    num_traits::Pow::pow(BigInt::from(10), d)
}

fn justified_digits(width: &Rational) -> u32 {
    let mut d = 0;
    while d < MAX_DIGITS && width * Rational::from_integer(pow10(d + 1)) <= Rational::one() {
        d += 1;
    }
    d
}

/// `x` truncated toward zero to `digits` places.
pub fn truncated(x: &Rational, digits: u32) -> String {
    let scaled = (x.abs() * Rational::from_integer(pow10(digits))).to_integer();
    let mut s = scaled.to_string();
    if digits > 0 {
        let width = digits as usize + 1;
        if s.len() < width {
            s = format!("{s:0>width$}");
        }
        s.insert(s.len() - digits as usize, '.');
    }
    if x.is_negative() {
        s.insert(0, '-');
    }
    s
}

/// Upper bound on a non-negative `w` with two significant figures, e.g. `1.3e-41`.
pub fn width_upper(w: &Rational) -> String {
    if w.is_zero() {
        return "0".into();
    }
    let ten = Rational::from_integer(BigInt::from(10));
    // find e with 10 <= w * 10^(-e) < 100, so the mantissa has two digits
    let mut e: i64 = 0;
    let mut scaled = w.clone();
    while scaled >= Rational::from_integer(BigInt::from(100)) {
        scaled /= &ten;
        e += 1;
    }
    while scaled < ten {
        scaled *= &ten;
        e -= 1;
    }
    let mut mantissa = scaled.ceil().to_integer();
    if mantissa == BigInt::from(100) {
        mantissa = BigInt::from(10);
        e += 1;
    }
    let m = mantissa.to_string();
    format!("{}.{}e{}", &m[..1], &m[1..], e + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn widths_round_up() {
        assert_eq!(width_upper(&r(0, 1)), "0");
        assert_eq!(width_upper(&r(1, 1)), "1.0e0");
        assert_eq!(width_upper(&r(1, 3)), "3.4e-1");
        assert_eq!(width_upper(&r(999, 1000)), "1.0e0");
        assert_eq!(width_upper(&r(1234, 1)), "1.3e3");
        assert_eq!(width_upper(&r(1, 100_000)), "1.0e-5");
    }

    #[test]
    fn truncation_toward_zero() {
        assert_eq!(truncated(&r(-12696, 10000), 3), "-1.269");
        assert_eq!(truncated(&r(1, 20), 4), "0.0500");
        assert_eq!(truncated(&r(-1, 20), 1), "-0.0");
        assert_eq!(truncated(&r(7, 2), 0), "3");
    }

    #[test]
    fn digits_follow_width() {
        let x = RationalInterval::new(r(12, 10), r(1201, 1000)).unwrap();
        let c = certified(&x);
        assert_eq!(c.value, "1.200");
        assert_eq!(c.width, "1.0e-3");
        let e = exact(&r(25, 4));
        assert_eq!(e.rational, "25/4");
        assert!(e.value.starts_with("6.25000"));
        assert_eq!(e.width, "0");
        assert_eq!(exact(&r(1, 3)).width, "1.0e-24");
    }
}
