//! Serializable report. Field order is the output order.

use bvpcf_core::{
    AlphaEnclosure, BvpTerms, Convergent, IndexCheck, Observed, PredictionOutcome, Thresholds, ViolationRecord,
};
use num_bigint::BigInt;
use serde::Serialize;

use crate::config::RunConfig;
use crate::decimal::{certified, exact, Certified, Exact};

pub const TOOL: &str = "bvpcf";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: ConfigEcho,
    pub radicands: Vec<RadicandReport>,
    pub violations: Vec<ViolationRow>,
    pub rejected: Vec<RejectedRow>,
    pub summary: Summary,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub command: &'static str,
    pub k: [u64; 2],
    pub m: [u32; 2],
    pub terms: usize,
    pub precision_cap: u64,
    pub format: &'static str,
}

impl From<&RunConfig> for ConfigEcho {
    fn from(c: &RunConfig) -> Self {
        ConfigEcho {
            command: c.command.name(),
            k: [*c.k.start(), *c.k.end()],
            m: [*c.m.start(), *c.m.end()],
            terms: c.terms,
            precision_cap: c.precision_cap,
            format: c.format.name(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RadicandReport {
    pub k: u64,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Certified>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub quotients: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<Row>,
    /// Indices not checked because `q_n < 2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<usize>,
    /// Smallest `n0` with the claim holding for all `n0 <= n <= N`;
    /// `null` when it fails at `N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdRow>,
}

impl RadicandReport {
    pub fn bare(k: u64, m: u32) -> Self {
        RadicandReport {
            k,
            m,
            alpha: None,
            precision_bits: None,
            quotients: Vec::new(),
            rows: Vec::new(),
            skipped: None,
            checked: None,
            violations: None,
            thresholds: None,
        }
    }

    pub fn with_alpha(mut self, alpha: &AlphaEnclosure) -> Self {
        self.alpha = Some(certified(&alpha.interval()));
        self.precision_bits = Some(alpha.bits());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdRow {
    pub remainder: Option<usize>,
    pub window: Option<usize>,
}

impl From<&Thresholds> for ThresholdRow {
    fn from(t: &Thresholds) -> Self {
        ThresholdRow { remainder: t.remainder, window: t.window }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub n: usize,
    pub b: String,
    pub p: String,
    pub q: String,
    pub side: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bvp: Option<BvpRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prediction: Option<PredictionRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<CheckRow>,
}

impl Row {
    pub fn convergent(c: &Convergent) -> Self {
        Row {
            n: c.n,
            b: c.b.to_string(),
            p: c.p.to_string(),
            q: c.q.to_string(),
            side: c.side.name(),
            bvp: None,
            prediction: None,
            checks: None,
        }
    }
}

/// Labels of the complete quotient `theta_n = [b_{n+1}; b_{n+2}, ...]`:
/// indexed by the convergent, and by its leading partial quotient.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThetaLabels {
    pub by_convergent: usize,
    pub by_leading_quotient: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BvpRow {
    pub d: String,
    /// `H_n` as `m p_n^(m-1) / (d_n q_n)` before reduction.
    pub h_unreduced: String,
    pub h: Exact,
    pub a: Exact,
    pub theta_labels: ThetaLabels,
    pub theta: Certified,
    pub remainder: Certified,
    pub w: Certified,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<Certified>,
    pub precision_bits: u64,
}

impl BvpRow {
    pub fn new(t: &BvpTerms, conv: &Convergent, m: u32) -> Self {
        let numer = BigInt::from(m) * num_traits::Pow::pow(&conv.p, m - 1);
        BvpRow {
            d: t.d.to_string(),
            h_unreduced: format!("{}/{}", numer, &t.d * &conv.q),
            h: exact(&t.h),
            a: exact(&t.a),
            theta_labels: ThetaLabels { by_convergent: t.n, by_leading_quotient: t.n + 1 },
            theta: certified(&t.theta),
            remainder: certified(&t.remainder),
            w: certified(&t.w),
            v: t.v.as_ref().map(certified),
            precision_bits: t.precision_bits,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictionRow {
    pub floor_h: String,
    pub candidate: String,
    /// `null` when neither `candidate` nor `candidate + 1` is `b_{n+1}`.
    pub epsilon: Option<u8>,
    pub predicted: String,
    pub actual: String,
    pub offset: String,
    pub formula_held: bool,
    pub window_held: bool,
    pub a_fraction_nonzero: bool,
}

impl From<&PredictionOutcome> for PredictionRow {
    fn from(p: &PredictionOutcome) -> Self {
        PredictionRow {
            floor_h: p.floor_h.to_string(),
            candidate: p.candidate.to_string(),
            epsilon: p.epsilon,
            predicted: p.predicted.to_string(),
            actual: p.actual.to_string(),
            offset: p.offset.to_string(),
            formula_held: p.formula_held,
            window_held: p.window_held,
            a_fraction_nonzero: p.a_fraction_nonzero,
        }
    }
}

/// Per-index claim outcomes; `null` marks claims not made at this index.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub remainder_inside_unit: bool,
    pub window_above: Option<bool>,
    pub reflected_lower: Option<bool>,
    pub reflected_upper: Option<bool>,
    pub epsilon_above: Option<bool>,
    pub epsilon_reflected: Option<bool>,
    pub v_sign_matches: Option<bool>,
    pub general_window: bool,
}

impl From<&IndexCheck> for CheckRow {
    fn from(c: &IndexCheck) -> Self {
        CheckRow {
            remainder_inside_unit: c.remainder_inside_unit,
            window_above: c.window_above,
            reflected_lower: c.reflected_lower,
            reflected_upper: c.reflected_upper,
            epsilon_above: c.epsilon_above,
            epsilon_reflected: c.epsilon_reflected,
            v_sign_matches: c.v_sign_matches,
            general_window: c.general_window,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObservedValue {
    Interval(Certified),
    Integer { value: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationRow {
    pub k: u64,
    pub m: u32,
    pub n: usize,
    pub quantity: &'static str,
    pub claimed: &'static str,
    pub observed: ObservedValue,
    pub side: &'static str,
    pub p: String,
    pub q: String,
    pub p_prev: String,
    pub q_prev: String,
    pub b_next: String,
    pub d: String,
}

impl From<&ViolationRecord> for ViolationRow {
    fn from(v: &ViolationRecord) -> Self {
        ViolationRow {
            k: v.k,
            m: v.m,
            n: v.n,
            quantity: v.quantity.name(),
            claimed: v.claimed,
            observed: match &v.observed {
                Observed::Interval(x) => ObservedValue::Interval(certified(x)),
                Observed::Integer(x) => ObservedValue::Integer { value: x.to_string() },
            },
            side: v.side.name(),
            p: v.p.to_string(),
            q: v.q.to_string(),
            p_prev: v.p_prev.to_string(),
            q_prev: v.q_prev.to_string(),
            b_next: v.b.to_string(),
            d: v.d.to_string(),
        }
    }
}

/// A pair not analysed: invalid radicand, or a failure such as the precision cap.
#[derive(Clone, Debug, Serialize)]
pub struct RejectedRow {
    pub k: u64,
    pub m: u32,
    pub reason: &'static str,
    pub error: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub radicands: usize,
    pub rows: usize,
    pub checked: usize,
    pub skipped: usize,
    pub violations: usize,
    pub remainder_bound: usize,
    pub window_above: usize,
    pub window_below: usize,
    pub epsilon_range: usize,
    pub predictions: usize,
    pub formula_held: usize,
    pub invalid: usize,
    pub failed: usize,
}

impl Report {
    pub fn new(config: &RunConfig) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            config: config.into(),
            radicands: Vec::new(),
            violations: Vec::new(),
            rejected: Vec::new(),
            summary: Summary::default(),
        }
    }

    /// Recomputes the counts in `summary` from the body.
    pub fn tally(&mut self) {
        let count = |q: &str| self.violations.iter().filter(|v| v.quantity == q).count();
        let rows = self.radicands.iter().flat_map(|r| &r.rows);
        let predictions: Vec<_> = rows.clone().filter_map(|r| r.prediction.as_ref()).collect();
        self.summary = Summary {
            radicands: self.radicands.len(),
            rows: rows.count(),
            checked: self.radicands.iter().filter_map(|r| r.checked).sum(),
            skipped: self.radicands.iter().filter_map(|r| r.skipped.as_ref().map(Vec::len)).sum(),
            violations: self.violations.len(),
            remainder_bound: count("remainder_bound"),
            window_above: count("window_above"),
            window_below: count("window_below"),
            epsilon_range: count("epsilon_range"),
            predictions: predictions.len(),
            formula_held: predictions.iter().filter(|p| p.formula_held).count(),
            invalid: self.rejected.iter().filter(|r| r.reason == REJECT_INVALID).count(),
            failed: self.rejected.iter().filter(|r| r.reason == REJECT_FAILED).count(),
        };
    }
}

pub const REJECT_INVALID: &str = "invalid";
pub const REJECT_FAILED: &str = "failed";
