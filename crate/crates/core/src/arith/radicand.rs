use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, Signed};

use super::{int_nth_root, prime_divisors, signum, Rational, RationalInterval};
use crate::error::{Error, Result};

/// A validated radicand: `alpha = k^(1/m)` is irrational of degree exactly `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RadicandSpec {
    k: u64,
    m: u32,
}

impl RadicandSpec {
    pub fn new(k: u64, m: u32) -> Result<Self> {
        validate_spec(k, m)
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k_big(&self) -> BigInt {
        BigInt::from(self.k)
    }

    /// `floor(alpha)`, exact.
    pub fn alpha_floor(&self) -> BigInt {
        int_nth_root(&BigUint::from(self.k), self.m).into()
    }

    /// `k * q^m`.
    pub fn scaled_power(&self, q: &BigInt) -> BigInt {
        self.k_big() * Pow::pow(q, self.m)
    }
}

impl fmt::Display for RadicandSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^(1/{})", self.k, self.m)
    }
}

/// Checks that `x^m - k` is irreducible over the rationals.
///
/// For positive `k` this holds iff `k` is not a `p`-th power for any prime
/// `p | m`; the `-4b^4` case of the general criterion needs `k < 0`.
pub fn validate_spec(k: u64, m: u32) -> Result<RadicandSpec> {
    if m < 2 {
        return Err(Error::InvalidDegree(m));
    }
    let kb = BigUint::from(k);
    for p in prime_divisors(m) {
        let r = int_nth_root(&kb, p);
        if r.pow(p) == kb {
            return Err(Error::PerfectPower { k, m, power: p });
        }
    }
    Ok(RadicandSpec { k, m })
}

/// `scaled_floor = floor(alpha * base^precision_digits)`.
///
/// Since `alpha` is irrational the induced interval
/// `[A / B^D, (A + 1) / B^D]` contains it in its interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaEnclosure {
    pub spec: RadicandSpec,
    pub precision_digits: u64,
    pub scaled_floor: BigUint,
    pub base: u32,
}

impl AlphaEnclosure {
    /// Base-2 enclosure with `bits` fractional bits.
    pub fn with_bits(spec: RadicandSpec, bits: u64) -> Self {
        let k = BigUint::from(spec.k) << (bits * u64::from(spec.m));
        AlphaEnclosure { spec, precision_digits: bits, scaled_floor: int_nth_root(&k, spec.m), base: 2 }
    }

    pub fn scale(&self) -> BigInt {
        Pow::pow(BigInt::from(self.base), self.precision_digits)
    }

    pub fn interval(&self) -> RationalInterval {
        let scale = self.scale();
        let a = BigInt::from(self.scaled_floor.clone());
        RationalInterval::from_ordered(Rational::new(a.clone(), scale.clone()), Rational::new(a + 1, scale))
    }

    /// Precision of the enclosure in bits, rounded down.
    pub fn bits(&self) -> u64 {
        if self.base == 2 {
            self.precision_digits
        } else {
            let per_digit = BigUint::from(self.base).bits() - 1;
            per_digit * self.precision_digits
        }
    }
}

pub fn alpha_floor_scaled(spec: RadicandSpec, digits: u64, base: u32) -> Result<AlphaEnclosure> {
    if base < 2 {
        return Err(Error::InvalidArgument(format!("enclosure base must be at least 2, got {base}")));
    }
    if base == 2 {
        return Ok(AlphaEnclosure::with_bits(spec, digits));
    }
    let shifted = BigUint::from(spec.k) * Pow::pow(BigUint::from(base), digits * u64::from(spec.m));
    Ok(AlphaEnclosure { spec, precision_digits: digits, scaled_floor: int_nth_root(&shifted, spec.m), base })
}

/// Sign of `u * alpha + v`, decided by integer comparison only.
///
/// Never returns `Equal` unless `u = v = 0`, since `alpha` is irrational.
pub fn sign_linear_in_alpha(spec: &RadicandSpec, u: &BigInt, v: &BigInt) -> Ordering {
    let su = signum(u);
    let sv = signum(v);
    match (su, sv) {
        (Ordering::Equal, _) => sv,
        (_, Ordering::Equal) => su,
        (a, b) if a == b => a,
        _ => {
            // opposite signs: compare k|u|^m against |v|^m
            let lhs = spec.scaled_power(&u.abs());
            let rhs = Pow::pow(v.abs(), spec.m);
            match lhs.cmp(&rhs) {
                Ordering::Greater => su,
                Ordering::Less => sv,
                Ordering::Equal => unreachable!("k^(1/m) is irrational"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, ToPrimitive};
    use proptest::prelude::*;

    fn spec(k: u64, m: u32) -> RadicandSpec {
        RadicandSpec::new(k, m).unwrap()
    }

    fn sign(k: u64, m: u32, u: i64, v: i64) -> Ordering {
        sign_linear_in_alpha(&spec(k, m), &BigInt::from(u), &BigInt::from(v))
    }

    #[test]
    fn validates_degrees_and_powers() {
        assert!(validate_spec(50, 10).is_ok());
        assert!(validate_spec(2, 2).is_ok());
        assert_eq!(validate_spec(8, 3), Err(Error::PerfectPower { k: 8, m: 3, power: 3 }));
        assert_eq!(validate_spec(4, 10), Err(Error::PerfectPower { k: 4, m: 10, power: 2 }));
        assert_eq!(validate_spec(1, 3), Err(Error::PerfectPower { k: 1, m: 3, power: 3 }));
        assert_eq!(validate_spec(5, 1), Err(Error::InvalidDegree(1)));
        // 8 = 2^3 but 3 does not divide 4: x^4 - 8 is irreducible
        assert!(validate_spec(8, 4).is_ok());
        // 32 = 2^5, 5 | 10
        assert!(matches!(validate_spec(32, 10), Err(Error::PerfectPower { power: 5, .. })));
    }

    #[test]
    fn scaled_floor_examples() {
        let e = alpha_floor_scaled(spec(50, 10), 8, 10).unwrap();
        // floor(1.4787576366... * 10^8); the 8-place rounding is 1.47875764
        assert_eq!(e.scaled_floor, BigUint::from(147_875_763u64));
        assert_eq!(alpha_floor_scaled(spec(2, 3), 3, 10).unwrap().scaled_floor, BigUint::from(1259u32));
        assert_eq!(alpha_floor_scaled(spec(2, 2), 0, 10).unwrap().scaled_floor, BigUint::from(1u32));
        assert!(alpha_floor_scaled(spec(2, 2), 4, 1).is_err());
    }

    #[test]
    fn enclosure_interval_has_unit_scaled_width() {
        let e = AlphaEnclosure::with_bits(spec(2, 3), 20);
        let iv = e.interval();
        assert_eq!(iv.width(), Rational::new(BigInt::one(), BigInt::from(1u64 << 20)));
        let lo = iv.lo().to_f64().unwrap();
        assert!((lo - 2f64.cbrt()).abs() < 1e-5);
    }

    #[test]
    fn linear_sign_examples() {
        assert_eq!(sign(2, 3, 1, -1), Ordering::Greater);
        assert_eq!(sign(2, 3, 3, -4), Ordering::Less);
        assert_eq!(sign(50, 10, 2, -3), Ordering::Less);
        assert_eq!(sign(2, 3, 0, -5), Ordering::Less);
        assert_eq!(sign(2, 3, 0, 0), Ordering::Equal);
        assert_eq!(sign(2, 3, -3, 4), Ordering::Greater);
        assert_eq!(sign(2, 3, -1, 2), Ordering::Greater);
        assert_eq!(sign(2, 3, 5, 1), Ordering::Greater);
    }

    proptest! {
        #[test]
        fn enclosure_is_sound(k in 2u64..100_000, m in 2u32..12, digits in 0u64..40, decimal in any::<bool>()) {
            let Ok(s) = RadicandSpec::new(k, m) else { return Ok(()) };
            let base = if decimal { 10u32 } else { 2 };
            let e = alpha_floor_scaled(s, digits, base).unwrap();
            let target = BigUint::from(k) * Pow::pow(BigUint::from(base), digits * u64::from(m));
            prop_assert!(Pow::pow(&e.scaled_floor, m) <= target);
            prop_assert!(Pow::pow(&e.scaled_floor + 1u32, m) > target);
        }

        #[test]
        fn linear_sign_agrees_with_fine_enclosure(
            k in 2u64..500, m in 2u32..8,
            u in -1_000_000i64..1_000_000, v in -1_000_000i64..1_000_000,
        ) {
            let Ok(s) = RadicandSpec::new(k, m) else { return Ok(()) };
            let exact = sign_linear_in_alpha(&s, &BigInt::from(u), &BigInt::from(v));
            let alpha = alpha_floor_scaled(s, 50, 10).unwrap().interval();
            let form = alpha.scale(&Rational::from_integer(u.into())).shift(&Rational::from_integer(v.into()));
            if let Some(approx) = form.sign() {
                prop_assert_eq!(exact, approx);
            }
        }
    }
}
