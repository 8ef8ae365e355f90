use std::process::{Command, Output};

use serde_json::Value;

fn bvpcf(args: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvpcf")).args(args.split_whitespace()).output().unwrap()
}

fn json(args: &str) -> Value {
    let out = bvpcf(&format!("{args} --format json"));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exit_statuses() {
    for (args, code) in [
        ("expand --k 50 --m 10 --terms 3", 0),
        ("--help", 0),
        ("--version", 0),
        ("expand --help", 0),
        ("scan --m 3 --k-range 5..2", 1),
        ("expand --k 2 --m 3 --unknown", 1),
        ("expand --k 2 --m 1", 1),
        ("expand --k 2 --m 3 --precision-cap 63", 1),
        ("expand --k 8 --m 3", 2),
        ("verify --k 32 --m 10 --terms 2", 2),
        ("expand --k 2 --m 3 --terms 200 --precision-cap 64", 3),
        ("scan --k 2 --m 3 --terms 200 --precision-cap 64", 3),
        ("expand --k 2 --m 3 --out /nonexistent-dir/report.txt", 4),
    ] {
        let out = bvpcf(args);
        assert_eq!(out.status.code(), Some(code), "{args}: {}", String::from_utf8_lossy(&out.stderr));
        if code != 0 {
            assert!(!out.stderr.is_empty(), "{args}: no diagnostic");
        }
    }
}

#[test]
fn perfect_power_has_no_report_body() {
    let out = bvpcf("expand --k 8 --m 3 --format json");
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("perfect power"));
}

#[test]
fn expansion_prefix_for_degree_ten() {
    let v = json("expand --k 50 --m 10 --terms 3");
    assert_eq!(v["radicands"][0]["quotients"], serde_json::json!(["1", "2", "11", "3"]));
    assert_eq!(v["config"]["command"], "expand");
    assert_eq!(v["tool"], "bvpcf");
}

#[test]
fn verify_degree_ten_single_remainder_violation() {
    let v = json("verify --k 50 --m 10 --terms 1");
    let violations = v["violations"].as_array().unwrap();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0]["quantity"], "remainder_bound");
    let observed = violations[0]["observed"]["value"].as_str().unwrap();
    assert!(observed.starts_with("-1.2696"), "{observed}");
    let row = &v["radicands"][0]["rows"][1];
    assert_eq!(row["bvp"]["h_unreduced"], "196830/15698");
    assert_eq!(row["bvp"]["theta_labels"]["by_convergent"], 1);
    assert_eq!(row["bvp"]["theta_labels"]["by_leading_quotient"], 2);
    assert_eq!(row["prediction"]["floor_h"], "12");
    assert_eq!(row["prediction"]["actual"], "11");
    assert_eq!(row["prediction"]["formula_held"], false);
    assert_eq!(v["summary"]["remainder_bound"], 1);
}

#[test]
fn clean_scan_has_empty_violations_and_zero_counts() {
    let v = json("scan --k 2 --m 5 --terms 5");
    assert_eq!(v["violations"], serde_json::json!([]));
    for key in ["violations", "remainder_bound", "window_above", "window_below", "epsilon_range", "invalid", "failed"] {
        assert_eq!(v["summary"][key], 0, "{key}");
    }
    let v = json("scan --k 8 --m 3 --terms 5");
    assert_eq!(v["violations"], serde_json::json!([]));
    assert_eq!(v["summary"]["radicands"], 0);
    assert_eq!(v["summary"]["violations"], 0);
    assert_eq!(v["summary"]["invalid"], 1);
}

#[test]
fn csv_row_for_degree_ten() {
    let out = bvpcf("verify --k 50 --m 10 --terms 1 --format csv");
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    assert_eq!(header.iter().collect::<Vec<_>>(), bvpcf_cli::CSV_HEADER.to_vec());
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let hit = rows
        .iter()
        .find(|r| r[col("k")] == *"50" && r[col("m")] == *"10" && r[col("n")] == *"1" && r[col("d")] == *"7849")
        .expect("row with k=50, m=10, n=1, d=7849");
    assert_eq!(&hit[col("bvpcf_csv_v1")], "convergent");
    assert_eq!(&hit[col("h")], "98415/7849");
    assert!(rows.iter().any(|r| &r[col("bvpcf_csv_v1")] == "violation" && &r[col("quantity")] == "remainder_bound"));
}

#[test]
fn reports_are_byte_stable() {
    for args in [
        "verify --k 2 --m 3 --terms 12 --format json",
        "verify --k 2 --m 3 --terms 12 --format csv",
        "predict --k 50 --m 10 --terms 5",
        "scan --k-range 2..30 --m-range 3..4 --terms 10 --format json",
    ] {
        let (a, b) = (bvpcf(args), bvpcf(args));
        assert_eq!(a.status.code(), Some(0), "{args}");
        assert_eq!(a.stdout, b.stdout, "{args}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = bvpcf(&format!("expand --k 2 --m 3 --terms 5 --format json --out {}", path.display()));
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["radicands"][0]["quotients"], serde_json::json!(["1", "3", "1", "5", "1", "1"]));
}

#[test]
fn text_report_states_reflected_failure_next_to_certified_remainder() {
    let out = bvpcf("verify --k 2 --m 3 --terms 2");
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().find(|l| l.trim_start().starts_with("2  below")).unwrap();
    assert!(row.contains("25/4"), "{row}");
    assert!(row.contains("-0.700"), "{row}");
    assert!(row.contains("reflected lower NO"), "{row}");
    assert!(text.contains("H_n <= b_{n+1} observed 5"));
}

#[test]
fn in_process_entry_point_matches_binary() {
    let args = "bvpcf verify --k 3 --m 3 --terms 6 --format json";
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let status = bvpcf_cli::main_with(args.split_whitespace(), &mut stdout, &mut stderr);
    assert_eq!(status, 0);
    assert_eq!(stdout, bvpcf(&args["bvpcf ".len()..]).stdout);
}
