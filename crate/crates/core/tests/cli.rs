use std::path::Path;
use std::process::{Command, Output};

use littlewood_core::{BoundReport, Certificate};

fn littlewood(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_littlewood")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn construct(dir: &Path, depth: &str) -> std::path::PathBuf {
    let path = dir.join(format!("cert{depth}.json"));
    let o = littlewood(&["construct", "--depth", depth, "--n0", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn min_scan_text_and_json() {
    let o = littlewood(&["min-scan", "--n", "7", "--a", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("5/13"));
    assert!(text.contains("pass_strict: true"));

    let o = littlewood(&["min-scan", "--n", "7", "--a", "1", "--format", "json"]);
    let report = BoundReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.lhs.to_string(), "5/13");
    assert_eq!(report.rhs_surd.as_deref(), Some("2/(3+sqrt5)"));
    assert!(report.decimal.starts_with("0.384615"));
}

#[test]
fn failing_checks_exit_one() {
    assert_eq!(littlewood(&["min-scan", "--n", "6", "--a", "1", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(littlewood(&["q2", "--n", "8", "--k", "2"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bogus"][..],
        &["min-scan", "--n", "7"],
        &["min-scan", "--n", "7", "--a", "1", "--nope"],
        &["min-scan", "--n", "6", "--a", "2"],
        &["q1", "--n", "6", "--x-max", "8"],
        &["construct", "--depth", "1", "--delta", "pow1"],
    ] {
        assert_eq!(littlewood(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn q1_q2_reports() {
    let o = littlewood(&["q1", "--n", "6", "--x-max", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("witness: 3/4"));
    let o = littlewood(&["q2", "--n", "6", "--k", "5"]);
    assert!(stdout(&o).contains("1/40"));
}

#[test]
fn construct_seed_only_to_stdout() {
    let o = littlewood(&["construct", "--depth", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let cert = Certificate::from_json(&stdout(&o)).unwrap();
    assert_eq!(cert.depth(), 0);
}

#[test]
fn certificate_file_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), "2");
    let text = std::fs::read_to_string(&path).unwrap();
    let cert = Certificate::from_json(&text).unwrap();
    assert_eq!(cert.to_json().unwrap(), text);

    let o = littlewood(&["verify-cert", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let mut bad = cert.clone();
    bad.stages[2].a += 1u32;
    let bad_path = dir.path().join("bad.json");
    std::fs::write(&bad_path, bad.to_json().unwrap()).unwrap();
    let o = littlewood(&["verify-cert", "--in", bad_path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let report = BoundReport::from_json(&stdout(&o)).unwrap();
    assert!(report.failed_checks().any(|c| c.name.starts_with("stage2.")));
}

#[test]
fn littlewood_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), "2");
    let cert = path.to_str().unwrap();
    let o = littlewood(&["littlewood", "--cert", cert, "--level", "1", "--proxy", "2"]);
    assert!(stdout(&o).contains("budget: x_max=4"));
    assert_eq!(littlewood(&["littlewood", "--cert", cert, "--level", "2", "--proxy", "2"]).status.code(), Some(2));
    assert_eq!(littlewood(&["littlewood", "--cert", cert, "--level", "0", "--proxy", "1"]).status.code(), Some(2));
}

#[test]
fn discrepancy_cap_flag() {
    let o = littlewood(&["discrepancy", "--n", "25", "--count", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2127/150050"));
    let o = littlewood(&["discrepancy", "--n", "25", "--count", "100", "--cap", "3/10"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn limit_table_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = littlewood(&["limit-table", "--n-from", "6", "--n-to", "9", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(!csv.contains('\r'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,F_n,scaled_min,decimal,pass_strict");
    assert!(lines[1].starts_with("6,8,3/8,0.375"));
    assert!(lines[1].ends_with(",false"));
    assert!(lines[2].starts_with("7,13,5/13,"));
    assert!(lines[5].starts_with("# achieved F_n*min in [0.375"));
}

#[test]
fn thread_count_does_not_change_output() {
    let one = littlewood(&["--threads", "1", "min-scan", "--n", "22", "--a", "5", "--format", "json"]);
    let many = littlewood(&["--threads", "4", "min-scan", "--n", "22", "--a", "5", "--format", "json"]);
    assert_eq!(one.stdout, many.stdout);
    let one = littlewood(&["--threads", "1", "construct", "--depth", "2"]);
    let many = littlewood(&["--threads", "3", "construct", "--depth", "2"]);
    assert_eq!(one.stdout, many.stdout);
}
