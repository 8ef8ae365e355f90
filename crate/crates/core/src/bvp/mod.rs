//! Bombieri-van der Poorten quantities for convergents of `k^(1/m)`.
//!
//! With `x = p_n / q_n` and `d_n = |p_n^m - k q_n^m|`:
//!
//! * `H_n = m p_n^(m-1) / (d_n q_n)` is the leading term,
//! * `A_n = H_n - q_{n-1} / q_n` is the shifted leading term,
//! * `W_n = (q_n^(m-2) / d_n) (sum_j x^j alpha^(m-1-j) - m x^(m-1))` is the
//!   general correction, so that `R_n = W_n - q_{n-1} / q_n`,
//! * for `m = 3`, `V_n = (q_n / d_n)(2x^2 - x alpha - alpha^2) = -W_n`.
//!
//! `theta_n = H_n + R_n` and `b_{n+1} = floor(theta_n)`. Integer and rational
//! quantities are exact; anything involving alpha is an enclosure.

mod verify;

pub use verify::{
    certified_terms, scan, verify_theorems, IndexCheck, Observed, Quantity, ScanCell, ScanOptions, ScanResult,
    Thresholds, Verification, VerificationSummary, ViolationRecord, EPSILON_ABOVE_CLAIM, EPSILON_BELOW_CLAIM,
    GENERAL_LOWER_CLAIM, GENERAL_UPPER_CLAIM, REFLECTED_LOWER_CLAIM, REFLECTED_UPPER_CLAIM, REMAINDER_CLAIM,
    WINDOW_ABOVE_CLAIM,
};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed};

use crate::arith::{is_integer, rational_floor, AlphaEnclosure, RadicandSpec, Rational, RationalInterval};
use crate::cf::{next_quotient_exact, norm_form, previous_pq, theta_enclosure, verify_quotient, Convergent, Side};
use crate::error::{Error, Result};

/// `d_n = |p_n^m - k q_n^m|`, strictly positive.
pub fn algebraic_distance(spec: &RadicandSpec, conv: &Convergent) -> BigInt {
    norm_form(spec, conv).abs()
}

/// `H_n = m p_n^(m-1) / (d_n q_n)`.
pub fn leading_term(spec: &RadicandSpec, conv: &Convergent) -> Rational {
    let d = algebraic_distance(spec, conv);
    let m = spec.m();
    Rational::new(BigInt::from(m) * Pow::pow(&conv.p, m - 1), d * &conv.q)
}

/// `A_n = H_n - q_{n-1} / q_n`.
pub fn shifted_leading_term(spec: &RadicandSpec, conv: &Convergent, prev: Option<&Convergent>) -> Rational {
    let (_, q_prev) = previous_pq(prev);
    leading_term(spec, conv) - Rational::new(q_prev, conv.q.clone())
}

/// `alpha` enclosed as `[t_lo, t_hi] / s`, with `u = p s` and `v_lo, v_hi = q t_lo, q t_hi`.
/// Every form below is a monotone function of `v` with one integer denominator,
/// so its endpoints come from evaluating at `v_lo` and `v_hi`.
struct Scaled {
    u: BigInt,
    v_lo: BigInt,
    v_hi: BigInt,
    s: BigInt,
}

fn scaled(conv: &Convergent, alpha: &AlphaEnclosure) -> Scaled {
    let s = alpha.scale();
    let t = BigInt::from(alpha.scaled_floor.clone());
    Scaled { u: &conv.p * &s, v_lo: &conv.q * &t, v_hi: &conv.q * (t + 1), s }
}

fn ordered(a: Rational, b: Rational) -> RationalInterval {
    if a <= b {
        RationalInterval::from_ordered(a, b)
    } else {
        RationalInterval::from_ordered(b, a)
    }
}

/// Enclosure of `W_n`. With `x = p/q` and `alpha = t/s`,
/// `W = (sum_j u^j v^(m-1-j) - m u^(m-1)) / (d q s^(m-1))`, increasing in `v`.
pub fn general_correction(spec: &RadicandSpec, conv: &Convergent, alpha: &AlphaEnclosure) -> Result<RationalInterval> {
    let m = spec.m();
    let Scaled { u, v_lo, v_hi, s } = scaled(conv, alpha);
    let u_top = Pow::pow(&u, m - 1);
    let linear = BigInt::from(m) * &u_top;
    let denom = algebraic_distance(spec, conv) * &conv.q * Pow::pow(&s, m - 1);
    let at = |v: &BigInt| {
        // Horner in u/v: sum_j u^j v^(m-1-j)
        let mut acc = BigInt::one();
        let mut u_pow = BigInt::one();
        for _ in 1..m {
            u_pow *= &u;
            acc = acc * v + &u_pow;
        }
        Rational::new(acc - &linear, denom.clone())
    };
    Ok(ordered(at(&v_lo), at(&v_hi)))
}

/// The two independent enclosures of `V_n` for a cubic convergent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicForms {
    /// `sgn(x - alpha) (2x + alpha) / (q^2 (x^2 + x alpha + alpha^2))`, sign
    /// attached from the exact side.
    pub closed: RationalInterval,
    /// `(q / d)(2x^2 - x alpha - alpha^2)`
    pub defining: RationalInterval,
}

/// Both forms are decreasing in `alpha > 0`; in scaled integers they are
/// `(2u + v) s / (q (u^2 + u v + v^2))` and `(2u^2 - u v - v^2) / (d q s^2)`.
pub fn cubic_forms(spec: &RadicandSpec, conv: &Convergent, alpha: &AlphaEnclosure) -> Result<CubicForms> {
    if spec.m() != 3 {
        return Err(Error::WrongDegree(spec.m()));
    }
    let Scaled { u, v_lo, v_hi, s } = scaled(conv, alpha);
    let u2 = &u * &u;
    let closed_at = |v: &BigInt| Rational::new((BigInt::from(2) * &u + v) * &s, &conv.q * (&u2 + &u * v + v * v));
    let magnitude = ordered(closed_at(&v_hi), closed_at(&v_lo));
    let closed = match conv.side {
        Side::Above => magnitude,
        Side::Below => -&magnitude,
    };

    let denom = algebraic_distance(spec, conv) * &conv.q * &s * &s;
    let defining_at = |v: &BigInt| Rational::new(BigInt::from(2) * &u2 - &u * v - v * v, denom.clone());
    let defining = ordered(defining_at(&v_hi), defining_at(&v_lo));
    Ok(CubicForms { closed, defining })
}

/// Enclosure of `V_n` (cubic only): intersection of the closed and defining forms.
pub fn cubic_correction(spec: &RadicandSpec, conv: &Convergent, alpha: &AlphaEnclosure) -> Result<RationalInterval> {
    let forms = cubic_forms(spec, conv, alpha)?;
    forms.closed.intersect(&forms.defining).ok_or(Error::InconsistentEnclosures { n: conv.n })
}

/// Two independent enclosures of `R_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemainderRoutes {
    /// `W_n - q_{n-1} / q_n`
    pub from_correction: RationalInterval,
    /// `theta_n - H_n`
    pub from_theta: RationalInterval,
}

pub fn remainder_routes(
    spec: &RadicandSpec,
    conv: &Convergent,
    prev: Option<&Convergent>,
    alpha: &AlphaEnclosure,
) -> Result<RemainderRoutes> {
    let (_, q_prev) = previous_pq(prev);
    let ratio = Rational::new(q_prev, conv.q.clone());
    let from_correction = general_correction(spec, conv, alpha)?.shift(&-ratio);
    let theta = theta_enclosure(spec, conv, prev, alpha)?;
    let from_theta = theta.interval.shift(&-leading_term(spec, conv));
    Ok(RemainderRoutes { from_correction, from_theta })
}

/// Enclosure of `R_n`: the intersection of both routes.
pub fn remainder(
    spec: &RadicandSpec,
    conv: &Convergent,
    prev: Option<&Convergent>,
    alpha: &AlphaEnclosure,
) -> Result<RationalInterval> {
    let routes = remainder_routes(spec, conv, prev, alpha)?;
    routes.from_correction.intersect(&routes.from_theta).ok_or(Error::InconsistentEnclosures { n: conv.n })
}

/// All BvP quantities at one index, at one precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BvpTerms {
    pub n: usize,
    pub side: Side,
    pub d: BigInt,
    pub h: Rational,
    pub a: Rational,
    pub theta: RationalInterval,
    pub remainder: RationalInterval,
    /// Only for `m = 3`.
    pub v: Option<RationalInterval>,
    pub w: RationalInterval,
    /// Bits of alpha behind the enclosures.
    pub precision_bits: u64,
}

pub fn bvp_terms(
    spec: &RadicandSpec,
    conv: &Convergent,
    prev: Option<&Convergent>,
    alpha: &AlphaEnclosure,
) -> Result<BvpTerms> {
    let (_, q_prev) = previous_pq(prev);
    let h = leading_term(spec, conv);
    let a = &h - Rational::new(q_prev, conv.q.clone());
    let theta = theta_enclosure(spec, conv, prev, alpha)?.interval;
    let w = general_correction(spec, conv, alpha)?;
    let remainder = remainder(spec, conv, prev, alpha)?;
    let v = match spec.m() {
        3 => Some(cubic_correction(spec, conv, alpha)?),
        _ => None,
    };
    Ok(BvpTerms {
        n: conv.n,
        side: conv.side,
        d: algebraic_distance(spec, conv),
        h,
        a,
        theta,
        remainder,
        v,
        w,
        precision_bits: alpha.bits(),
    })
}

/// Outcome of the floor-formula prediction `b_{n+1} = floor(A_n) + eps`, `eps in {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictionOutcome {
    pub n: usize,
    pub side: Side,
    pub h: Rational,
    pub a: Rational,
    pub floor_h: BigInt,
    /// `floor(A_n)`
    pub candidate: BigInt,
    /// `Some(0)` or `Some(1)` when one of the two admissible values is
    /// certified; `None` when neither is.
    pub epsilon: Option<u8>,
    /// `candidate + epsilon`, or `candidate` when unresolved.
    pub predicted: BigInt,
    pub actual: BigInt,
    /// `actual - candidate`, exact.
    pub offset: BigInt,
    pub formula_held: bool,
    /// `H_n - 2 < b_{n+1} <= H_n`
    pub window_held: bool,
    /// `A_n` is not an integer.
    pub a_fraction_nonzero: bool,
}

/// Predicts `b_{n+1}` from `H_n` and `A_n`, settling `eps` with at most two
/// exact [`verify_quotient`] calls.
pub fn predict_next(spec: &RadicandSpec, conv: &Convergent, prev: &Convergent) -> PredictionOutcome {
    let h = leading_term(spec, conv);
    let a = &h - Rational::new(prev.q.clone(), conv.q.clone());
    let candidate = rational_floor(&a);
    let epsilon =
        [0u8, 1].into_iter().find(|e| verify_quotient(spec, conv, Some(prev), &(&candidate + BigInt::from(*e))));
    let predicted = &candidate + BigInt::from(epsilon.unwrap_or(0));
    let actual = match epsilon {
        Some(_) => predicted.clone(),
        None => next_quotient_exact(spec, conv, Some(prev)),
    };
    let actual_rat = Rational::from_integer(actual.clone());
    let window_held = &h - Rational::from_integer(2.into()) < actual_rat && actual_rat <= h;
    PredictionOutcome {
        n: conv.n,
        side: conv.side,
        floor_h: rational_floor(&h),
        a_fraction_nonzero: !is_integer(&a),
        offset: &actual - &candidate,
        formula_held: epsilon.is_some(),
        h,
        a,
        candidate,
        epsilon,
        predicted,
        actual,
        window_held,
    }
}
