//! Certified regular continued fractions of `alpha = k^(1/m)`.
//!
//! [`expand`] runs the Gauss map `x -> 1/(x - floor(x))` on an interval
//! enclosure of alpha and restarts at doubled precision whenever a floor is
//! ambiguous. [`expand_exact_oracle`] derives each quotient from
//! [`verify_quotient`] alone and shares no code with the interval path.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::arith::{rational_floor, sign_linear_in_alpha, AlphaEnclosure, RadicandSpec, Rational, RationalInterval};
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;

/// Which side of alpha a convergent lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `p/q > alpha`
    Above,
    /// `p/q < alpha`
    Below,
}

impl Side {
    /// `sgn(p/q - alpha)`
    pub fn sign(self) -> Ordering {
        match self {
            Side::Above => Ordering::Greater,
            Side::Below => Ordering::Less,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Above => "above",
            Side::Below => "below",
        }
    }
}

/// Decides `p/q` against alpha exactly, i.e. `p^m` against `k q^m`.
pub fn side_of(spec: &RadicandSpec, p: &BigInt, q: &BigInt) -> Side {
    match sign_linear_in_alpha(spec, q, &-p) {
        Ordering::Greater => Side::Below,
        _ => Side::Above,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub n: usize,
    pub b: BigInt,
    pub p: BigInt,
    pub q: BigInt,
    pub side: Side,
}

impl Convergent {
    pub fn value(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }
}

/// `(p_{n-1}, q_{n-1})`, with the seed `(1, 0)` standing in for `n = 0`.
pub fn previous_pq(prev: Option<&Convergent>) -> (BigInt, BigInt) {
    match prev {
        Some(c) => (c.p.clone(), c.q.clone()),
        None => (BigInt::one(), BigInt::zero()),
    }
}

/// Running state of the convergent recurrence.
#[derive(Clone, Debug)]
pub struct Recurrence {
    spec: RadicandSpec,
    n: usize,
    prev: (BigInt, BigInt),
    before: (BigInt, BigInt),
}

impl Recurrence {
    /// Seeds `(p_{-1}, q_{-1}) = (1, 0)` and `(p_{-2}, q_{-2}) = (0, 1)`.
    pub fn new(spec: RadicandSpec) -> Self {
        Recurrence { spec, n: 0, prev: (BigInt::one(), BigInt::zero()), before: (BigInt::zero(), BigInt::one()) }
    }

    pub fn step(&mut self, b: BigInt) -> Convergent {
        let conv =
            convergent_step(&self.spec, self.n, (&self.prev.0, &self.prev.1), (&self.before.0, &self.before.1), b);
        self.before = std::mem::replace(&mut self.prev, (conv.p.clone(), conv.q.clone()));
        self.n += 1;
        conv
    }
}

/// `p_n = b p_{n-1} + p_{n-2}`, `q_n = b q_{n-1} + q_{n-2}`.
pub fn convergent_step(
    spec: &RadicandSpec,
    n: usize,
    prev: (&BigInt, &BigInt),
    before: (&BigInt, &BigInt),
    b: BigInt,
) -> Convergent {
    let p = &b * prev.0 + before.0;
    let q = &b * prev.1 + before.1;
    let side = side_of(spec, &p, &q);
    Convergent { n, b, p, q, side }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub spec: RadicandSpec,
    pub terms: Vec<Convergent>,
    /// Bits of alpha needed by the interval pass; 0 for the exact oracle.
    pub precision_used: u64,
}

impl Expansion {
    pub fn quotients(&self) -> Vec<BigInt> {
        self.terms.iter().map(|c| c.b.clone()).collect()
    }

    pub fn term(&self, n: usize) -> Option<&Convergent> {
        self.terms.get(n)
    }

    pub fn previous(&self, n: usize) -> Option<&Convergent> {
        n.checked_sub(1).and_then(|i| self.terms.get(i))
    }

    /// Highest index `n` in the expansion.
    pub fn last_index(&self) -> usize {
        self.terms.len() - 1
    }

    fn from_quotients(spec: RadicandSpec, quotients: Vec<BigInt>, precision_used: u64) -> Self {
        let mut rec = Recurrence::new(spec);
        let terms = quotients.into_iter().map(|b| rec.step(b)).collect();
        Expansion { spec, terms, precision_used }
    }
}

/// Enclosure of the complete quotient `theta_n = [b_{n+1}; b_{n+2}, ...]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaEnclosure {
    pub n: usize,
    pub interval: RationalInterval,
}

impl ThetaEnclosure {
    /// Enclosure of the fractional part `theta_n - b_{n+1}`.
    pub fn fractional_part(&self, b_next: &BigInt) -> RationalInterval {
        self.interval.shift(&Rational::from_integer(-b_next))
    }
}

/// Enclosure of `|q_n alpha - p_n|`; needs the sign to be decided by `alpha`.
pub(crate) fn abs_error(conv: &Convergent, alpha: &AlphaEnclosure) -> Result<RationalInterval> {
    let e = alpha.interval().scale(&Rational::from_integer(conv.q.clone())).shift(&Rational::from_integer(-&conv.p));
    let oriented = match conv.side {
        Side::Below => e,
        Side::Above => -&e,
    };
    if !oriented.lo().is_positive() {
        return Err(Error::InsufficientPrecision { bits: alpha.bits() });
    }
    Ok(oriented)
}

/// `theta_n = 1 / (q_n |q_n alpha - p_n|) - q_{n-1} / q_n`.
pub fn theta_enclosure(
    spec: &RadicandSpec,
    conv: &Convergent,
    prev: Option<&Convergent>,
    alpha: &AlphaEnclosure,
) -> Result<ThetaEnclosure> {
    debug_assert_eq!(*spec, alpha.spec);
    let (_, q_prev) = previous_pq(prev);
    let q = Rational::from_integer(conv.q.clone());
    let inv = abs_error(conv, alpha)?.scale(&q).recip()?;
    let interval = inv.shift(&-Rational::new(q_prev, conv.q.clone()));
    Ok(ThetaEnclosure { n: conv.n, interval })
}

/// [`theta_enclosure`] refined until its width is at most `max_width`.
pub fn theta_enclosure_refined(
    spec: &RadicandSpec,
    conv: &Convergent,
    prev: Option<&Convergent>,
    policy: &PrecisionPolicy,
    max_width: &Rational,
) -> Result<ThetaEnclosure> {
    policy.refine_alpha(*spec, |alpha| {
        let theta = theta_enclosure(spec, conv, prev, alpha)?;
        if &theta.interval.width() > max_width {
            return Err(Error::InsufficientPrecision { bits: alpha.bits() });
        }
        Ok(theta)
    })
}

/// Exact test of `theta_n >= t`.
///
/// `theta_n - t = ((p_{n-1} + t p_n) - (q_{n-1} + t q_n) alpha) / (q_n alpha - p_n)`,
/// so both signs reduce to [`sign_linear_in_alpha`].
pub fn theta_at_least(spec: &RadicandSpec, conv: &Convergent, prev: Option<&Convergent>, t: &BigInt) -> bool {
    let (p_prev, q_prev) = previous_pq(prev);
    let u = -(q_prev + t * &conv.q);
    let v = p_prev + t * &conv.p;
    let numer = sign_linear_in_alpha(spec, &u, &v);
    let denom = sign_linear_in_alpha(spec, &conv.q, &-&conv.p);
    numer == denom
}

/// `true` iff `floor(theta_n) = t`, i.e. `b_{n+1} = t`. Integer arithmetic only.
pub fn verify_quotient(spec: &RadicandSpec, conv: &Convergent, prev: Option<&Convergent>, t: &BigInt) -> bool {
    theta_at_least(spec, conv, prev, t) && !theta_at_least(spec, conv, prev, &(t + 1))
}

/// `b_{n+1}` by doubling then bisection over [`theta_at_least`].
pub fn next_quotient_exact(spec: &RadicandSpec, conv: &Convergent, prev: Option<&Convergent>) -> BigInt {
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    while theta_at_least(spec, conv, prev, &hi) {
        lo = hi.clone();
        hi *= 2;
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if theta_at_least(spec, conv, prev, &mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn check_term_count(n_terms: usize) -> Result<()> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("term count must be at least 1".into()));
    }
    Ok(())
}

/// Quotients `b_0..=b_n_terms` from one pass of the interval Gauss map.
fn gauss_map_pass(n_terms: usize, alpha: &AlphaEnclosure) -> Result<Vec<BigInt>> {
    let undecided = || Error::InsufficientPrecision { bits: alpha.bits() };
    let iv = alpha.interval();
    // alpha is irrational, so it lies in the open interval (lo, hi); the
    // Gauss map is strictly monotone on each branch and preserves that.
    let (mut lo, mut hi) = (iv.lo().clone(), iv.hi().clone());
    let mut out = Vec::with_capacity(n_terms + 1);
    loop {
        let b = rational_floor(&lo);
        let b_rat = Rational::from_integer(b.clone());
        if hi > &b_rat + Rational::one() {
            return Err(undecided());
        }
        out.push(b);
        if out.len() > n_terms {
            return Ok(out);
        }
        let below = &lo - &b_rat;
        if below.is_zero() {
            return Err(undecided());
        }
        let next_lo = (&hi - &b_rat).recip();
        hi = below.recip();
        lo = next_lo;
    }
}

/// Partial quotients `b_0..=b_{n_terms}` with convergents, certified.
pub fn expand(spec: &RadicandSpec, n_terms: usize, policy: &PrecisionPolicy) -> Result<Expansion> {
    check_term_count(n_terms)?;
    let (bits, quotients) = policy.refine_alpha(*spec, |alpha| Ok((alpha.bits(), gauss_map_pass(n_terms, alpha)?)))?;
    assert_eq!(quotients[0], spec.alpha_floor(), "b_0 must equal floor(alpha)");
    let expansion = Expansion::from_quotients(*spec, quotients, bits);
    let last = expansion.last_index();
    let (conv, prev) = (&expansion.terms[last - 1], expansion.previous(last - 1));
    assert!(
        verify_quotient(spec, conv, prev, &expansion.terms[last].b),
        "interval expansion disagrees with the exact oracle at n = {last}"
    );
    Ok(expansion)
}

/// Same contract as [`expand`], computed from [`verify_quotient`]-style
/// exact decisions only.
pub fn expand_exact_oracle(spec: &RadicandSpec, n_terms: usize) -> Result<Expansion> {
    check_term_count(n_terms)?;
    let mut rec = Recurrence::new(*spec);
    let mut terms: Vec<Convergent> = vec![rec.step(spec.alpha_floor())];
    while terms.len() <= n_terms {
        let n = terms.len() - 1;
        let b = next_quotient_exact(spec, &terms[n], n.checked_sub(1).map(|i| &terms[i]));
        terms.push(rec.step(b));
    }
    Ok(Expansion { spec: *spec, terms, precision_used: 0 })
}

/// `|p_n q_{n-1} - p_{n-1} q_n|`; equals 1 for every genuine convergent.
pub fn determinant(conv: &Convergent, prev: Option<&Convergent>) -> BigInt {
    let (p_prev, q_prev) = previous_pq(prev);
    (&conv.p * q_prev - p_prev * &conv.q).abs()
}

/// `q_n^2 |x_n - alpha| = q_n |q_n alpha - p_n|`, enclosed; its inverse is
/// `theta_n + q_{n-1}/q_n`.
pub fn scaled_error(conv: &Convergent, alpha: &AlphaEnclosure) -> Result<RationalInterval> {
    Ok(abs_error(conv, alpha)?.scale(&Rational::from_integer(conv.q.clone())))
}

/// `p_n^m - k q_n^m`, signed.
pub fn norm_form(spec: &RadicandSpec, conv: &Convergent) -> BigInt {
    Pow::pow(&conv.p, spec.m()) - spec.scaled_power(&conv.q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn spec(k: u64, m: u32) -> RadicandSpec {
        RadicandSpec::new(k, m).unwrap()
    }

    fn bs(e: &Expansion) -> Vec<u64> {
        e.quotients().iter().map(|b| u64::try_from(b).unwrap()).collect()
    }

    #[test]
    fn convergent_recurrence_from_seeds() {
        let s = spec(2, 3);
        let mut rec = Recurrence::new(s);
        let c0 = rec.step(BigInt::from(1));
        assert_eq!((c0.p.clone(), c0.q.clone()), (1.into(), 1.into()));
        assert_eq!(c0.side, Side::Below);
        let c1 = rec.step(BigInt::from(3));
        assert_eq!((c1.p.clone(), c1.q.clone()), (4.into(), 3.into()));
        assert_eq!(c1.side, Side::Above);

        let mut rec = Recurrence::new(spec(50, 10));
        rec.step(1.into());
        let c1 = rec.step(2.into());
        assert_eq!((c1.p, c1.q, c1.side), (3.into(), 2.into(), Side::Above));
    }

    #[test]
    fn expansion_examples() {
        let p = PrecisionPolicy::default();
        assert_eq!(bs(&expand(&spec(50, 10), 3, &p).unwrap()), vec![1, 2, 11, 3]);
        assert_eq!(bs(&expand(&spec(2, 3), 6, &p).unwrap()), vec![1, 3, 1, 5, 1, 1, 4]);
        assert_eq!(bs(&expand(&spec(2, 2), 4, &p).unwrap()), vec![1, 2, 2, 2, 2]);
        assert!(matches!(expand(&spec(2, 2), 0, &p), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn long_expansion_bumps_precision() {
        let e = expand(&spec(2, 3), 60, &PrecisionPolicy::default()).unwrap();
        assert!(e.precision_used > 64);
        assert_eq!(e.terms.len(), 61);
    }

    #[test]
    fn precision_ceiling_is_reported() {
        let tight = PrecisionPolicy { initial_bits: 64, max_bits: 128 };
        assert_eq!(expand(&spec(2, 3), 200, &tight), Err(Error::PrecisionCeiling { max_bits: 128 }));
    }

    #[test]
    fn exact_oracle_examples() {
        assert_eq!(bs(&expand_exact_oracle(&spec(50, 10), 3).unwrap()), vec![1, 2, 11, 3]);
        assert_eq!(bs(&expand_exact_oracle(&spec(2, 3), 6).unwrap()), vec![1, 3, 1, 5, 1, 1, 4]);
        let e = expand_exact_oracle(&spec(2, 2), 10).unwrap();
        assert_eq!(e, expand(&spec(2, 2), 10, &PrecisionPolicy::default()).unwrap().with_precision(0));
    }

    impl Expansion {
        fn with_precision(mut self, bits: u64) -> Self {
            self.precision_used = bits;
            self
        }
    }

    #[test]
    fn verify_quotient_examples() {
        let e = expand_exact_oracle(&spec(50, 10), 3).unwrap();
        let s = e.spec;
        assert!(verify_quotient(&s, &e.terms[1], Some(&e.terms[0]), &11.into()));
        assert!(!verify_quotient(&s, &e.terms[1], Some(&e.terms[0]), &12.into()));
        assert!(!verify_quotient(&s, &e.terms[1], Some(&e.terms[0]), &10.into()));
        let e = expand_exact_oracle(&spec(2, 3), 3).unwrap();
        assert!(verify_quotient(&e.spec, &e.terms[1], Some(&e.terms[0]), &1.into()));
        assert!(verify_quotient(&e.spec, &e.terms[0], None, &3.into()));
    }

    #[test]
    fn theta_examples() {
        let e = expand(&spec(50, 10), 3, &PrecisionPolicy::default()).unwrap();
        let alpha = AlphaEnclosure::with_bits(e.spec, 128);
        let th = theta_enclosure(&e.spec, &e.terms[1], Some(&e.terms[0]), &alpha).unwrap();
        assert!(th.interval.is_near(&ratio(112_689, 10_000), &ratio(1, 10_000)));
        assert!(th.interval.width() <= ratio(1, 10_000));
        assert!(th.fractional_part(&11.into()).within_open(&ratio(0, 1), &ratio(1, 1)));

        let e = expand(&spec(2, 3), 3, &PrecisionPolicy::default()).unwrap();
        let th = theta_enclosure(&e.spec, &e.terms[0], None, &AlphaEnclosure::with_bits(e.spec, 64)).unwrap();
        // 1/(cbrt 2 - 1) = 3.847322101863...
        assert!(th
            .interval
            .is_near(&ratio(3_847_322_101_863u64, 1_000_000_000_000u64), &ratio(1u64, 1_000_000_000_000u64)));
    }

    #[test]
    fn theta_width_never_grows_with_precision() {
        let e = expand(&spec(7, 5), 12, &PrecisionPolicy::default()).unwrap();
        for n in 1..=12 {
            let mut last: Option<RationalInterval> = None;
            for bits in [128u64, 256, 512, 1024] {
                let th = theta_enclosure(&e.spec, &e.terms[n], e.previous(n), &AlphaEnclosure::with_bits(e.spec, bits))
                    .unwrap()
                    .interval;
                if let Some(prev) = &last {
                    assert!(th.width() <= prev.width());
                    assert!(th.overlaps(prev));
                }
                last = Some(th);
            }
        }
    }

    #[test]
    fn coarse_precision_is_reported_as_insufficient() {
        let e = expand(&spec(2, 3), 30, &PrecisionPolicy::default()).unwrap();
        let coarse = AlphaEnclosure::with_bits(e.spec, 8);
        assert!(matches!(
            theta_enclosure(&e.spec, &e.terms[30], e.previous(30), &coarse),
            Err(Error::InsufficientPrecision { bits: 8 })
        ));
    }
}
