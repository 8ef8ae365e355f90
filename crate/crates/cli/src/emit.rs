use std::fmt::Write as _;

use serde::Serialize;

use crate::config::Format;
use crate::decimal::Certified;
use crate::error::CliError;
use crate::report::{ObservedValue, RadicandReport, Report, Row};

pub fn emit(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(|e| CliError::Io(e.into()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => csv_bytes(report),
        Format::Text => Ok(text(report).into_bytes()),
    }
}

pub const CSV_HEADER: [&str; 33] = [
    "bvpcf_csv_v1",
    "command",
    "k",
    "m",
    "n",
    "side",
    "b",
    "p",
    "q",
    "d",
    "h",
    "h_value",
    "a",
    "a_value",
    "theta",
    "theta_width",
    "remainder",
    "remainder_width",
    "remainder_inside_unit",
    "b_next",
    "candidate",
    "epsilon",
    "predicted",
    "formula_held",
    "window_held",
    "quantity",
    "claimed",
    "observed",
    "observed_width",
    "checked",
    "remainder_threshold",
    "window_threshold",
    "error",
];

/// One CSV line; the first column names the record kind.
#[derive(Debug, Default, Serialize)]
struct CsvRecord<'a> {
    #[serde(rename = "bvpcf_csv_v1")]
    record: &'a str,
    command: &'a str,
    k: u64,
    m: u32,
    n: Option<usize>,
    side: Option<&'a str>,
    b: Option<&'a str>,
    p: Option<&'a str>,
    q: Option<&'a str>,
    d: Option<&'a str>,
    h: Option<&'a str>,
    h_value: Option<&'a str>,
    a: Option<&'a str>,
    a_value: Option<&'a str>,
    theta: Option<&'a str>,
    theta_width: Option<&'a str>,
    remainder: Option<&'a str>,
    remainder_width: Option<&'a str>,
    remainder_inside_unit: Option<bool>,
    b_next: Option<&'a str>,
    candidate: Option<&'a str>,
    epsilon: Option<u8>,
    predicted: Option<&'a str>,
    formula_held: Option<bool>,
    window_held: Option<bool>,
    quantity: Option<&'a str>,
    claimed: Option<&'a str>,
    observed: Option<&'a str>,
    observed_width: Option<&'a str>,
    checked: Option<usize>,
    remainder_threshold: Option<usize>,
    window_threshold: Option<usize>,
    error: Option<&'a str>,
}

fn csv_bytes(report: &Report) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    let command = report.config.command;
    for r in &report.radicands {
        for row in &r.rows {
            w.serialize(row_record(command, r, row))?;
        }
        if let Some(t) = &r.thresholds {
            w.serialize(CsvRecord {
                record: "radicand",
                command,
                k: r.k,
                m: r.m,
                checked: r.checked,
                remainder_threshold: t.remainder,
                window_threshold: t.window,
                ..Default::default()
            })?;
        }
    }
    for v in &report.violations {
        let (observed, observed_width) = match &v.observed {
            ObservedValue::Interval(c) => (c.value.as_str(), Some(c.width.as_str())),
            ObservedValue::Integer { value } => (value.as_str(), None),
        };
        w.serialize(CsvRecord {
            record: "violation",
            command,
            k: v.k,
            m: v.m,
            n: Some(v.n),
            side: Some(v.side),
            p: Some(&v.p),
            q: Some(&v.q),
            d: Some(&v.d),
            b_next: Some(&v.b_next),
            quantity: Some(v.quantity),
            claimed: Some(v.claimed),
            observed: Some(observed),
            observed_width,
            ..Default::default()
        })?;
    }
    for r in &report.rejected {
        w.serialize(CsvRecord {
            record: r.reason,
            command,
            k: r.k,
            m: r.m,
            error: Some(&r.error),
            ..Default::default()
        })?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

fn row_record<'a>(command: &'a str, r: &RadicandReport, row: &'a Row) -> CsvRecord<'a> {
    let mut rec = CsvRecord {
        record: "convergent",
        command,
        k: r.k,
        m: r.m,
        n: Some(row.n),
        side: Some(row.side),
        b: Some(&row.b),
        p: Some(&row.p),
        q: Some(&row.q),
        ..Default::default()
    };
    if let Some(t) = &row.bvp {
        rec.d = Some(&t.d);
        rec.h = Some(&t.h.rational);
        rec.h_value = Some(&t.h.value);
        rec.a = Some(&t.a.rational);
        rec.a_value = Some(&t.a.value);
        rec.theta = Some(&t.theta.value);
        rec.theta_width = Some(&t.theta.width);
        rec.remainder = Some(&t.remainder.value);
        rec.remainder_width = Some(&t.remainder.width);
    }
    if let Some(p) = &row.prediction {
        rec.b_next = Some(&p.actual);
        rec.candidate = Some(&p.candidate);
        rec.epsilon = p.epsilon;
        rec.predicted = Some(&p.predicted);
        rec.formula_held = Some(p.formula_held);
        rec.window_held = Some(p.window_held);
    }
    if let Some(c) = &row.checks {
        rec.remainder_inside_unit = Some(c.remainder_inside_unit);
    }
    rec
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |out: &mut String, cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "  {}", padded.join("  ").trim_end());
    };
    line(out, header.to_vec());
    for r in rows {
        line(out, r.iter().map(String::as_str).collect());
    }
}

fn cert(c: &Certified) -> String {
    format!("{} (w {})", c.value, c.width)
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "NO" }.into()
}

fn opt(b: Option<bool>) -> String {
    b.map_or_else(|| "-".into(), yes_no)
}

fn threshold(t: Option<usize>) -> String {
    t.map_or_else(|| "not reached".into(), |n| n.to_string())
}

fn radicand_text(out: &mut String, command: &str, r: &RadicandReport) {
    let _ = writeln!(out, "alpha = {}^(1/{})", r.k, r.m);
    if let (Some(a), Some(bits)) = (&r.alpha, r.precision_bits) {
        let _ = writeln!(out, "  enclosure {} at {bits} bits", cert(a));
    }
    if let Some((b0, rest)) = r.quotients.split_first() {
        let _ = writeln!(out, "  partial quotients [{b0}; {}]", rest.join(", "));
    }
    match command {
        "expand" => {
            let rows: Vec<_> = r
                .rows
                .iter()
                .map(|x| vec![x.n.to_string(), x.b.clone(), x.side.into(), x.p.clone(), x.q.clone()])
                .collect();
            table(out, &["n", "b_n", "side", "p_n", "q_n"], &rows);
        }
        "predict" => {
            let rows: Vec<_> = r
                .rows
                .iter()
                .filter_map(|x| {
                    let (t, p) = (x.bvp.as_ref()?, x.prediction.as_ref()?);
                    Some(vec![
                        x.n.to_string(),
                        x.side.into(),
                        x.q.clone(),
                        t.h.rational.clone(),
                        t.a.rational.clone(),
                        p.candidate.clone(),
                        p.epsilon.map_or_else(|| "-".into(), |e| e.to_string()),
                        p.actual.clone(),
                        p.offset.clone(),
                        yes_no(p.formula_held),
                        yes_no(p.window_held),
                    ])
                })
                .collect();
            table(
                out,
                &["n", "side", "q_n", "H_n", "A_n", "candidate", "eps", "b_{n+1}", "offset", "formula", "window"],
                &rows,
            );
        }
        "verify" => {
            let rows: Vec<_> = r
                .rows
                .iter()
                .filter_map(|x| {
                    let (t, p, c) = (x.bvp.as_ref()?, x.prediction.as_ref()?, x.checks.as_ref()?);
                    let window = match (c.window_above, c.reflected_lower, c.reflected_upper) {
                        (Some(held), _, _) => format!("above {}", yes_no(held)),
                        (None, Some(lo), Some(hi)) => format!("reflected lower {} upper {}", yes_no(lo), yes_no(hi)),
                        _ => format!("general {}", yes_no(c.general_window)),
                    };
                    let eps = c.epsilon_above.or(c.epsilon_reflected);
                    Some(vec![
                        x.n.to_string(),
                        x.side.into(),
                        x.q.clone(),
                        p.actual.clone(),
                        t.h.rational.clone(),
                        t.a.rational.clone(),
                        cert(&t.theta),
                        cert(&t.remainder),
                        yes_no(c.remainder_inside_unit),
                        window,
                        p.epsilon.map_or_else(|| "-".into(), |e| e.to_string()),
                        opt(eps),
                    ])
                })
                .collect();
            let _ = writeln!(out, "  theta_n is the complete quotient [b_{{n+1}}; b_{{n+2}}, ...]");
            table(
                out,
                &[
                    "n",
                    "side",
                    "q_n",
                    "b_{n+1}",
                    "H_n",
                    "A_n",
                    "theta_n",
                    "R_n",
                    "|R_n|<1",
                    "window",
                    "eps",
                    "eps claim",
                ],
                &rows,
            );
            if let Some(skipped) = r.skipped.as_ref().filter(|s| !s.is_empty()) {
                let list: Vec<String> = skipped.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "  skipped (q_n < 2): n = {}", list.join(", "));
            }
        }
        _ => {}
    }
    if let Some(t) = &r.thresholds {
        let _ = writeln!(
            out,
            "  thresholds: |R_n| < 1 from n = {}, window from n = {}",
            threshold(t.remainder),
            threshold(t.window)
        );
    }
    out.push('\n');
}

pub fn text(report: &Report) -> String {
    let c = &report.config;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {}  k = {}..{}  m = {}..{}  terms = {}  precision cap = {} bits\n",
        report.tool, report.version, c.command, c.k[0], c.k[1], c.m[0], c.m[1], c.terms, c.precision_cap
    );
    if c.command == "scan" {
        let rows: Vec<_> = report
            .radicands
            .iter()
            .map(|r| {
                let t = r.thresholds.unwrap_or(crate::report::ThresholdRow { remainder: None, window: None });
                vec![
                    r.k.to_string(),
                    r.m.to_string(),
                    r.checked.unwrap_or(0).to_string(),
                    r.violations.unwrap_or(0).to_string(),
                    threshold(t.remainder),
                    threshold(t.window),
                ]
            })
            .collect();
        table(&mut out, &["k", "m", "checked", "violations", "n0 |R|<1", "n0 window"], &rows);
        out.push('\n');
    } else {
        for r in &report.radicands {
            radicand_text(&mut out, c.command, r);
        }
    }
    if !report.violations.is_empty() {
        let _ = writeln!(out, "violations (measured):");
        for v in &report.violations {
            let observed = match &v.observed {
                ObservedValue::Interval(x) => cert(x),
                ObservedValue::Integer { value } => value.clone(),
            };
            let _ = writeln!(
                out,
                "  k = {} m = {} n = {} {} [{}]: {} observed {} (b_{{n+1}} = {}, q_n = {}, d = {})",
                v.k, v.m, v.n, v.side, v.quantity, v.claimed, observed, v.b_next, v.q, v.d
            );
        }
        out.push('\n');
    }
    for r in &report.rejected {
        let _ = writeln!(out, "{} k = {} m = {}: {}", r.reason, r.k, r.m, r.error);
    }
    let s = &report.summary;
    let _ = writeln!(
        out,
        "summary: radicands {} rows {} checked {} skipped {} violations {} \
         (remainder {} window above {} window below {} epsilon {}) predictions {} formula held {} invalid {} failed {}",
        s.radicands,
        s.rows,
        s.checked,
        s.skipped,
        s.violations,
        s.remainder_bound,
        s.window_above,
        s.window_below,
        s.epsilon_range,
        s.predictions,
        s.formula_held,
        s.invalid,
        s.failed
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_matches_record_fields() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(CsvRecord::default()).unwrap();
        let bytes = w.into_inner().unwrap();
        let first = String::from_utf8(bytes).unwrap().lines().next().unwrap().to_string();
        assert_eq!(first, CSV_HEADER.join(","));
    }
}
