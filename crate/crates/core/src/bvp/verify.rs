//! Per-index checking of the stability, window and floor-formula claims,
//! and multi-radicand scans built on top of it.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use super::{bvp_terms, cubic_forms, predict_next, BvpTerms, PredictionOutcome};
use crate::arith::{rational_floor, RadicandSpec, Rational, RationalInterval};
use crate::cf::{expand, previous_pq, Convergent, Expansion, Side};
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    RemainderBound,
    WindowAbove,
    WindowBelow,
    EpsilonRange,
}

impl Quantity {
    pub const ALL: [Quantity; 4] =
        [Quantity::RemainderBound, Quantity::WindowAbove, Quantity::WindowBelow, Quantity::EpsilonRange];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::RemainderBound => "remainder_bound",
            Quantity::WindowAbove => "window_above",
            Quantity::WindowBelow => "window_below",
            Quantity::EpsilonRange => "epsilon_range",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observed {
    Interval(RationalInterval),
    Integer(BigInt),
}

/// A failed claim, with enough data to recompute it from scratch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationRecord {
    pub k: u64,
    pub m: u32,
    pub n: usize,
    pub quantity: Quantity,
    pub observed: Observed,
    pub claimed: &'static str,
    pub side: Side,
    pub p: BigInt,
    pub q: BigInt,
    pub p_prev: BigInt,
    pub q_prev: BigInt,
    /// `b_{n+1}`
    pub b: BigInt,
    pub d: BigInt,
}

impl ViolationRecord {
    fn sort_key(&self) -> (u32, u64, usize, Quantity, &'static str) {
        (self.m, self.k, self.n, self.quantity, self.claimed)
    }

    /// Re-derives the claim from the stored data alone and reports whether
    /// it still fails.
    pub fn recheck(&self, policy: &PrecisionPolicy) -> Result<bool> {
        let spec = RadicandSpec::new(self.k, self.m)?;
        let side = crate::cf::side_of(&spec, &self.p, &self.q);
        let conv = Convergent { n: self.n, b: BigInt::one(), p: self.p.clone(), q: self.q.clone(), side };
        let prev = Convergent {
            n: self.n.saturating_sub(1),
            b: BigInt::one(),
            p: self.p_prev.clone(),
            q: self.q_prev.clone(),
            side,
        };
        let prev = (self.n > 0).then_some(&prev);
        if super::algebraic_distance(&spec, &conv) != self.d || !crate::cf::verify_quotient(&spec, &conv, prev, &self.b)
        {
            return Ok(false);
        }
        let claim = CLAIMS
            .iter()
            .find(|c| c.text == self.claimed)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown claim {:?}", self.claimed)))?;
        match claim.kind {
            ClaimKind::Remainder => {
                let inside = certified_terms(&spec, &conv, prev, policy)?.1;
                Ok(!inside)
            }
            ClaimKind::Exact(check) => {
                let h = super::leading_term(&spec, &conv);
                let a = &h - Rational::new(self.q_prev.clone(), self.q.clone());
                Ok(!check(&h, &a, &self.b))
            }
        }
    }
}

type ExactCheck = fn(&Rational, &Rational, &BigInt) -> bool;

#[derive(Clone, Copy)]
enum ClaimKind {
    Remainder,
    /// `(H_n, A_n, b_{n+1}) -> holds`
    Exact(ExactCheck),
}

struct Claim {
    text: &'static str,
    kind: ClaimKind,
}

fn as_rat(b: &BigInt) -> Rational {
    Rational::from_integer(b.clone())
}

fn window_above(h: &Rational, _: &Rational, b: &BigInt) -> bool {
    h - as_rat(&2.into()) < as_rat(b) && &as_rat(b) <= h
}

fn reflected_lower(h: &Rational, _: &Rational, b: &BigInt) -> bool {
    h <= &as_rat(b)
}

fn reflected_upper(h: &Rational, _: &Rational, b: &BigInt) -> bool {
    as_rat(b) < h + as_rat(&2.into())
}

fn epsilon_zero_one(_: &Rational, a: &Rational, b: &BigInt) -> bool {
    let e = b - rational_floor(a);
    e == BigInt::from(0) || e == BigInt::from(1)
}

fn epsilon_minus_one_zero(_: &Rational, a: &Rational, b: &BigInt) -> bool {
    let e = b - rational_floor(a);
    e == BigInt::from(0) || e == BigInt::from(-1)
}

fn general_upper(h: &Rational, _: &Rational, b: &BigInt) -> bool {
    &as_rat(b) <= h
}

fn general_lower(h: &Rational, _: &Rational, b: &BigInt) -> bool {
    as_rat(&(b + 2)) > *h
}

pub const REMAINDER_CLAIM: &str = "|R_n| < 1";
pub const WINDOW_ABOVE_CLAIM: &str = "above side: H_n - 2 < b_{n+1} <= H_n";
pub const REFLECTED_LOWER_CLAIM: &str = "below side, reflected window: H_n <= b_{n+1}";
pub const REFLECTED_UPPER_CLAIM: &str = "below side, reflected window: b_{n+1} < H_n + 2";
pub const EPSILON_ABOVE_CLAIM: &str = "above side: b_{n+1} - floor(A_n) in {0, 1}";
pub const EPSILON_BELOW_CLAIM: &str = "below side, reflected: b_{n+1} - floor(A_n) in {-1, 0}";
pub const GENERAL_UPPER_CLAIM: &str = "general degree: b_{n+1} <= H_n";
pub const GENERAL_LOWER_CLAIM: &str = "general degree: b_{n+1} + 2 > H_n";

const CLAIMS: [Claim; 8] = [
    Claim { text: REMAINDER_CLAIM, kind: ClaimKind::Remainder },
    Claim { text: WINDOW_ABOVE_CLAIM, kind: ClaimKind::Exact(window_above) },
    Claim { text: REFLECTED_LOWER_CLAIM, kind: ClaimKind::Exact(reflected_lower) },
    Claim { text: REFLECTED_UPPER_CLAIM, kind: ClaimKind::Exact(reflected_upper) },
    Claim { text: EPSILON_ABOVE_CLAIM, kind: ClaimKind::Exact(epsilon_zero_one) },
    Claim { text: EPSILON_BELOW_CLAIM, kind: ClaimKind::Exact(epsilon_minus_one_zero) },
    Claim { text: GENERAL_UPPER_CLAIM, kind: ClaimKind::Exact(general_upper) },
    Claim { text: GENERAL_LOWER_CLAIM, kind: ClaimKind::Exact(general_lower) },
];

/// Everything measured at one index with `q_n >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexCheck {
    pub n: usize,
    pub p: BigInt,
    pub q: BigInt,
    pub b_next: BigInt,
    pub terms: BvpTerms,
    pub prediction: PredictionOutcome,
    /// `R_n` enclosure lies strictly inside `(-1, 1)`. When false it lies
    /// entirely outside `[-1, 1]`.
    pub remainder_inside_unit: bool,
    /// Cubic, above side: `H_n - 2 < b_{n+1} <= H_n`.
    pub window_above: Option<bool>,
    /// Cubic, below side: `H_n <= b_{n+1}`.
    pub reflected_lower: Option<bool>,
    /// Cubic, below side: `b_{n+1} < H_n + 2`.
    pub reflected_upper: Option<bool>,
    /// Cubic, above side: `eps in {0, 1}`.
    pub epsilon_above: Option<bool>,
    /// Cubic, below side: `eps in {-1, 0}`.
    pub epsilon_reflected: Option<bool>,
    /// Cubic: the defining form of `V_n` has the sign of `x_n - alpha`.
    pub v_sign_matches: Option<bool>,
    /// Any degree: `b_{n+1} <= H_n` and `b_{n+1} + 2 > H_n`.
    pub general_window: bool,
}

/// Least index from which a property holds through the last checked index;
/// `None` if it fails at the last index itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub remainder: Option<usize>,
    pub window: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationSummary {
    pub checked: usize,
    pub skipped: usize,
    pub remainder_bound: usize,
    pub window_above: usize,
    pub window_below: usize,
    pub epsilon_range: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub spec: RadicandSpec,
    pub max_index: usize,
    pub expansion: Expansion,
    pub checks: Vec<IndexCheck>,
    /// Indices with `q_n < 2`.
    pub skipped: Vec<usize>,
    pub violations: Vec<ViolationRecord>,
    pub thresholds: Thresholds,
    pub summary: VerificationSummary,
}

impl Verification {
    pub fn check(&self, n: usize) -> Option<&IndexCheck> {
        self.checks.iter().find(|c| c.n == n)
    }
}

/// Computes the BvP terms at increasing precision until the `R_n`
/// enclosure is strictly inside `(-1, 1)` or strictly outside `[-1, 1]`.
/// The flag is `true` for inside.
pub fn certified_terms(
    spec: &RadicandSpec,
    conv: &Convergent,
    prev: Option<&Convergent>,
    policy: &PrecisionPolicy,
) -> Result<(BvpTerms, bool)> {
    let one = Rational::one();
    let minus_one = -Rational::one();
    // also keep printed enclosures tight
    let max_width = Rational::new(BigInt::one(), BigInt::one() << 40u32);
    policy.refine_alpha(*spec, |alpha| {
        let terms = bvp_terms(spec, conv, prev, alpha)?;
        let undecided = Err(Error::InsufficientPrecision { bits: alpha.bits() });
        if terms.remainder.width() > max_width {
            return undecided;
        }
        if spec.m() == 3 && cubic_forms(spec, conv, alpha)?.defining.sign().is_none() {
            return undecided;
        }
        if terms.remainder.within_open(&minus_one, &one) {
            Ok((terms, true))
        } else if terms.remainder.outside_closed(&minus_one, &one) {
            Ok((terms, false))
        } else {
            undecided
        }
    })
}

fn threshold(failures: impl Iterator<Item = usize>, max_index: usize) -> Option<usize> {
    match failures.max() {
        None => Some(1),
        Some(n) if n >= max_index => None,
        Some(n) => Some(n + 1),
    }
}

/// Checks every index `1 <= n <= max_index` with `q_n >= 2`.
///
/// Index 0 always has `q_0 = 1` and is reported as skipped.
pub fn verify_theorems(spec: &RadicandSpec, max_index: usize, policy: &PrecisionPolicy) -> Result<Verification> {
    let expansion = expand(spec, max_index + 1, policy)?;
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let mut violations = Vec::new();
    let cubic = spec.m() == 3;

    for n in 0..=max_index {
        let conv = &expansion.terms[n];
        let prev = match expansion.previous(n) {
            Some(prev) if conv.q >= BigInt::from(2) => prev,
            _ => {
                skipped.push(n);
                continue;
            }
        };
        let b_next = expansion.terms[n + 1].b.clone();
        let (terms, inside) = certified_terms(spec, conv, Some(prev), policy)?;
        let prediction = predict_next(spec, conv, prev);
        debug_assert_eq!(prediction.actual, b_next);

        let (h, a) = (&terms.h, &terms.a);
        let above = conv.side == Side::Above;
        let on = |cond: bool, check: ExactCheck| (cubic && cond).then(|| check(h, a, &b_next));
        let v_sign_matches = if cubic {
            let alpha = crate::arith::AlphaEnclosure::with_bits(*spec, terms.precision_bits);
            Some(cubic_forms(spec, conv, &alpha)?.defining.sign() == Some(conv.side.sign()))
        } else {
            None
        };
        let check = IndexCheck {
            n,
            p: conv.p.clone(),
            q: conv.q.clone(),
            window_above: on(above, window_above),
            reflected_lower: on(!above, reflected_lower),
            reflected_upper: on(!above, reflected_upper),
            epsilon_above: on(above, epsilon_zero_one),
            epsilon_reflected: on(!above, epsilon_minus_one_zero),
            v_sign_matches,
            general_window: general_upper(h, a, &b_next) && general_lower(h, a, &b_next),
            remainder_inside_unit: inside,
            b_next,
            terms,
            prediction,
        };

        let mut record = |claim: &'static str, quantity: Quantity, observed: Observed| {
            let (p_prev, q_prev) = previous_pq(Some(prev));
            violations.push(ViolationRecord {
                k: spec.k(),
                m: spec.m(),
                n,
                quantity,
                observed,
                claimed: claim,
                side: conv.side,
                p: conv.p.clone(),
                q: conv.q.clone(),
                p_prev,
                q_prev,
                b: check.b_next.clone(),
                d: check.terms.d.clone(),
            });
        };
        if !check.remainder_inside_unit {
            record(REMAINDER_CLAIM, Quantity::RemainderBound, Observed::Interval(check.terms.remainder.clone()));
        }
        let integer = || Observed::Integer(check.b_next.clone());
        if cubic {
            let epsilon = || Observed::Integer(check.prediction.offset.clone());
            for (held, claim, quantity, observed) in [
                (check.window_above, WINDOW_ABOVE_CLAIM, Quantity::WindowAbove, integer()),
                (check.reflected_lower, REFLECTED_LOWER_CLAIM, Quantity::WindowBelow, integer()),
                (check.reflected_upper, REFLECTED_UPPER_CLAIM, Quantity::WindowBelow, integer()),
                (check.epsilon_above, EPSILON_ABOVE_CLAIM, Quantity::EpsilonRange, epsilon()),
                (check.epsilon_reflected, EPSILON_BELOW_CLAIM, Quantity::EpsilonRange, epsilon()),
            ] {
                if held == Some(false) {
                    record(claim, quantity, observed);
                }
            }
        } else {
            let window = if above { Quantity::WindowAbove } else { Quantity::WindowBelow };
            let (h, a) = (&check.terms.h, &check.terms.a);
            if !general_upper(h, a, &check.b_next) {
                record(GENERAL_UPPER_CLAIM, window, integer());
            }
            if !general_lower(h, a, &check.b_next) {
                record(GENERAL_LOWER_CLAIM, window, integer());
            }
        }
        checks.push(check);
    }

    let thresholds = Thresholds {
        remainder: threshold(checks.iter().filter(|c| !c.remainder_inside_unit).map(|c| c.n), max_index),
        window: threshold(checks.iter().filter(|c| !c.general_window).map(|c| c.n), max_index),
    };
    let count = |q: Quantity| violations.iter().filter(|v| v.quantity == q).count();
    let summary = VerificationSummary {
        checked: checks.len(),
        skipped: skipped.len(),
        remainder_bound: count(Quantity::RemainderBound),
        window_above: count(Quantity::WindowAbove),
        window_below: count(Quantity::WindowBelow),
        epsilon_range: count(Quantity::EpsilonRange),
    };
    Ok(Verification { spec: *spec, max_index, expansion, checks, skipped, violations, thresholds, summary })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    /// Largest index checked per radicand.
    pub max_index: usize,
    pub policy: PrecisionPolicy,
    /// Keep only these quantities; `None` keeps all.
    pub quantities: Option<Vec<Quantity>>,
}

impl ScanOptions {
    pub fn new(max_index: usize) -> Self {
        ScanOptions { max_index, policy: PrecisionPolicy::default(), quantities: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanCell {
    pub k: u64,
    pub m: u32,
    pub checked: usize,
    pub violations: usize,
    pub thresholds: Thresholds,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanResult {
    /// Sorted by `(m, k, n)`.
    pub violations: Vec<ViolationRecord>,
    /// Sorted by `(m, k)`.
    pub cells: Vec<ScanCell>,
    /// Pairs rejected by [`RadicandSpec::new`].
    pub invalid: Vec<(u64, u32, Error)>,
    /// Pairs whose verification failed, e.g. at the precision ceiling.
    pub failed: Vec<(u64, u32, Error)>,
}

/// Runs [`verify_theorems`] over every `(k, m)` in the ranges, in parallel.
/// The output does not depend on scheduling.
pub fn scan(k_range: RangeInclusive<u64>, m_range: RangeInclusive<u32>, opts: &ScanOptions) -> ScanResult {
    let pairs: Vec<(u64, u32)> = m_range.flat_map(|m| k_range.clone().map(move |k| (k, m))).collect();
    let outcomes: Vec<_> = pairs
        .par_iter()
        .map(|&(k, m)| {
            let spec = RadicandSpec::new(k, m).map_err(|e| (true, e))?;
            verify_theorems(&spec, opts.max_index, &opts.policy).map_err(|e| (false, e))
        })
        .collect();

    let mut result = ScanResult::default();
    for (&(k, m), outcome) in pairs.iter().zip(outcomes) {
        match outcome {
            Ok(v) => {
                let kept: Vec<_> = v
                    .violations
                    .into_iter()
                    .filter(|r| opts.quantities.as_ref().is_none_or(|qs| qs.contains(&r.quantity)))
                    .collect();
                result.cells.push(ScanCell {
                    k,
                    m,
                    checked: v.summary.checked,
                    violations: kept.len(),
                    thresholds: v.thresholds,
                });
                result.violations.extend(kept);
            }
            Err((true, e)) => result.invalid.push((k, m, e)),
            Err((false, e)) => result.failed.push((k, m, e)),
        }
    }
    result.violations.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    result.cells.sort_by_key(|a| (a.m, a.k));
    result.invalid.sort_by_key(|a| (a.1, a.0));
    result.failed.sort_by_key(|a| (a.1, a.0));
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn verify(k: u64, m: u32, n: usize) -> Verification {
        verify_theorems(&RadicandSpec::new(k, m).unwrap(), n, &PrecisionPolicy::default()).unwrap()
    }

    #[test]
    fn degree_ten_counterexample_is_the_only_record() {
        let v = verify(50, 10, 1);
        assert_eq!(v.skipped, vec![0]);
        assert_eq!(v.violations.len(), 1);
        let r = &v.violations[0];
        assert_eq!((r.k, r.m, r.n, r.quantity), (50, 10, 1, Quantity::RemainderBound));
        assert_eq!(r.d, BigInt::from(7849));
        let Observed::Interval(iv) = &r.observed else { panic!("expected interval") };
        assert!(iv.hi() < &ratio(-1, 1));
        assert!(iv.is_near(&ratio(-12_696, 10_000), &ratio(1, 10_000)));
        assert!(r.recheck(&PrecisionPolicy::default()).unwrap());
    }

    #[test]
    fn cube_root_of_two_short_sweep() {
        let v = verify(2, 3, 30);
        assert_eq!(v.summary.remainder_bound, 0);
        assert_eq!(v.summary.window_above, 0);
        assert_eq!(v.thresholds.remainder, Some(1));
        assert!(v.checks.iter().all(|c| c.v_sign_matches == Some(true)));
    }

    #[test]
    fn reflected_lower_bound_fails_at_index_two() {
        let v = verify(2, 3, 5);
        let c = v.check(2).unwrap();
        assert_eq!(c.terms.h, ratio(25, 4));
        assert_eq!(c.b_next, BigInt::from(5));
        assert_eq!(c.reflected_lower, Some(false));
        assert_eq!(c.reflected_upper, Some(true));
        assert!(c.remainder_inside_unit);
        let r = v.violations.iter().find(|r| r.n == 2 && r.claimed == REFLECTED_LOWER_CLAIM).expect("record for n = 2");
        assert_eq!(r.quantity, Quantity::WindowBelow);
        assert!(r.recheck(&PrecisionPolicy::default()).unwrap());
    }

    #[test]
    fn thresholds_follow_last_failure() {
        assert_eq!(threshold([].into_iter(), 30), Some(1));
        assert_eq!(threshold([1].into_iter(), 30), Some(2));
        assert_eq!(threshold([1, 4].into_iter(), 30), Some(5));
        assert_eq!(threshold([30].into_iter(), 30), None);
    }

    #[test]
    fn scan_edge_cases() {
        #[allow(clippy::reversed_empty_ranges)]
        let empty = scan(5..=2, 3..=3, &ScanOptions::new(5));
        assert_eq!(empty, ScanResult::default());

        let one = scan(50..=50, 10..=10, &ScanOptions::new(1));
        assert_eq!(one.violations.len(), 1);
        assert_eq!(one.violations[0].quantity, Quantity::RemainderBound);

        let with_invalid = scan(7..=9, 3..=3, &ScanOptions::new(3));
        assert_eq!(with_invalid.invalid.len(), 1);
        assert_eq!(with_invalid.invalid[0].0, 8);
        assert_eq!(with_invalid.cells.len(), 2);
    }

    #[test]
    fn scan_quantity_filter() {
        let mut opts = ScanOptions::new(6);
        opts.quantities = Some(vec![Quantity::RemainderBound]);
        let r = scan(2..=6, 3..=3, &opts);
        assert!(r.violations.is_empty());
        let all = scan(2..=6, 3..=3, &ScanOptions::new(6));
        assert!(all.violations.iter().any(|v| v.quantity == Quantity::WindowBelow));
    }
}
