use bvpcf_core::{
    certified_terms, expand, predict_next, scan, verify_theorems, AlphaEnclosure, Error, PrecisionPolicy, RadicandSpec,
    ScanOptions,
};

use crate::config::{Command, RunConfig};
use crate::error::{CliError, EXIT_INTERNAL, EXIT_OK, EXIT_PRECISION_CEILING};
use crate::report::{
    BvpRow, CheckRow, PredictionRow, RadicandReport, RejectedRow, Report, Row, ThresholdRow, ViolationRow,
    REJECT_FAILED, REJECT_INVALID,
};

/// A finished run. `status` is non-zero when a scan completed but some
/// pairs could not be analysed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub status: i32,
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let policy = PrecisionPolicy::with_max_bits(config.precision_cap);
    let mut report = Report::new(config);
    let mut status = EXIT_OK;

    if config.command == Command::Scan {
        let opts = ScanOptions { policy, ..ScanOptions::new(config.terms) };
        let result = scan(config.k.clone(), config.m.clone(), &opts);
        report.radicands = result
            .cells
            .iter()
            .map(|c| RadicandReport {
                checked: Some(c.checked),
                violations: Some(c.violations),
                thresholds: Some(ThresholdRow::from(&c.thresholds)),
                ..RadicandReport::bare(c.k, c.m)
            })
            .collect();
        report.violations = result.violations.iter().map(ViolationRow::from).collect();
        let rejected = |reason, list: &[(u64, u32, Error)]| {
            list.iter().map(|(k, m, e)| RejectedRow { k: *k, m: *m, reason, error: e.to_string() }).collect::<Vec<_>>()
        };
        report.rejected = rejected(REJECT_INVALID, &result.invalid);
        report.rejected.extend(rejected(REJECT_FAILED, &result.failed));
        for (_, _, e) in &result.failed {
            let code = if matches!(e, Error::PrecisionCeiling { .. }) { EXIT_PRECISION_CEILING } else { EXIT_INTERNAL };
            status = status.max(code);
        }
    } else {
        for m in config.m.clone() {
            for k in config.k.clone() {
                let spec = RadicandSpec::new(k, m)?;
                let (radicand, violations) = analyse(config.command, &spec, config.terms, &policy)?;
                report.radicands.push(radicand);
                report.violations.extend(violations);
            }
        }
    }
    report.tally();
    Ok(Outcome { report, status })
}

fn analyse(
    command: Command,
    spec: &RadicandSpec,
    terms: usize,
    policy: &PrecisionPolicy,
) -> Result<(RadicandReport, Vec<ViolationRow>), CliError> {
    let mut out = RadicandReport::bare(spec.k(), spec.m());
    let mut violations = Vec::new();
    match command {
        Command::Expand | Command::Predict => {
            let e = expand(spec, terms, policy)?;
            out = out.with_alpha(&AlphaEnclosure::with_bits(*spec, e.precision_used));
            out.quotients = e.quotients().iter().map(ToString::to_string).collect();
            for (n, c) in e.terms.iter().enumerate() {
                let mut row = Row::convergent(c);
                if let (Command::Predict, Some(prev)) = (command, e.previous(n)) {
                    let (bvp, _) = certified_terms(spec, c, Some(prev), policy)?;
                    row.bvp = Some(BvpRow::new(&bvp, c, spec.m()));
                    row.prediction = Some(PredictionRow::from(&predict_next(spec, c, prev)));
                }
                out.rows.push(row);
            }
        }
        Command::Verify => {
            let v = verify_theorems(spec, terms, policy)?;
            out = out.with_alpha(&AlphaEnclosure::with_bits(*spec, v.expansion.precision_used));
            out.quotients = v.expansion.quotients().iter().take(terms + 1).map(ToString::to_string).collect();
            for c in v.expansion.terms.iter().take(terms + 1) {
                let mut row = Row::convergent(c);
                if let Some(check) = v.check(c.n) {
                    row.bvp = Some(BvpRow::new(&check.terms, c, spec.m()));
                    row.prediction = Some(PredictionRow::from(&check.prediction));
                    row.checks = Some(CheckRow::from(check));
                }
                out.rows.push(row);
            }
            out.skipped = Some(v.skipped.clone());
            out.checked = Some(v.summary.checked);
            out.violations = Some(v.violations.len());
            out.thresholds = Some(ThresholdRow::from(&v.thresholds));
            violations = v.violations.iter().map(ViolationRow::from).collect();
        }
        Command::Scan => unreachable!("scans are handled by run"),
    }
    Ok((out, violations))
}
