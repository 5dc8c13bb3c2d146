//! End-to-end contract tests for the binary: exit codes, output schemas,
//! and the JSON round trip.

use std::process::{Command, Output};

fn linkform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkform")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn classify_nonstandard_member_exits_zero() {
    let out = linkform(&["classify", "5,5,-7;5,-7,9"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("n               -25"));
    assert!(text.contains("rho             18"));
    assert!(text.contains("verdict         nonstandard"));
    assert!(text.contains("not even homotopy equivalent"));
}

#[test]
fn classify_standard_member() {
    let out = linkform(&["classify", "1,1,1;1,5,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verdict         standard"));
    assert!(text.contains("lambda=1"));
}

#[test]
fn classify_rejects_bad_congruence_with_exit_2() {
    let out = linkform(&["classify", "3,1,1;1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("a1 = 3 is 3 mod 4"));
}

#[test]
fn classify_reports_parse_position_with_exit_2() {
    let out = linkform(&["classify", "5,5,x;5,-7,9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("position 4"), "{}", stderr(&out));
}

#[test]
fn classify_infinite_torsion_renders_no_verdict() {
    let out = linkform(&["classify", "5,5,-7;5,5,-7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("infinite (Z)"));
    assert!(text.contains("no verdict"));
}

#[test]
fn classify_json_round_trips_through_rederivation() {
    let out = linkform(&["classify", "13,-3,5;13,5,-7", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();

    let raw = [
        v["a1"].as_i64().unwrap(),
        v["a2"].as_i64().unwrap(),
        v["a3"].as_i64().unwrap(),
        v["b1"].as_i64().unwrap(),
        v["b2"].as_i64().unwrap(),
        v["b3"].as_i64().unwrap(),
    ];
    let params = linkform::family::FamilyParams::validate(raw).unwrap();
    let rederived = linkform::classify::classify(&params).unwrap().to_json();
    assert_eq!(v, rederived, "JSON report must be reproducible from its params");
}

#[test]
fn classify_csv_uses_the_exact_header() {
    let out = linkform(&["classify", "5,5,-7;5,-7,9", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a1,a2,a3,b1,b2,b3,n,h4_order,rho,kappa,verdict,egs_prime"));
    assert_eq!(lines.next(), Some("5,5,-7,5,-7,9,-25,25,18,7,nonstandard,5"));
}

#[test]
fn construct_examples_and_rejection() {
    let out = linkform(&["construct", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["m"], 3);
    assert_eq!(v["verdict"]["kind"], "nonstandard");

    let out = linkform(&["construct", "13"]);
    assert!(stdout(&out).contains("13,-3,5;13,5,-7"));

    let out = linkform(&["construct", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not a prime ≡ 1 mod 4"));
}

#[test]
fn search_bound_one_emits_single_unclassified_row() {
    let out = linkform(&["search", "--bound", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a1,a2,a3,b1,b2,b3,n,h4_order,rho,kappa,verdict,egs_prime"));
    assert_eq!(lines.next(), Some("1,1,1,1,1,1,0,0,,,infinite_torsion,"));
    assert_eq!(lines.next(), None);
}

#[test]
fn search_rejects_zero_bound() {
    let out = linkform(&["search", "--bound", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pinned_nonstandard_search_contains_the_construction() {
    let out = linkform(&[
        "search",
        "--pin-p",
        "5",
        "--bound",
        "11",
        "--filter",
        "nonstandard",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        stdout(&out).lines().any(|l| l.starts_with("5,5,-7,5,-7,9,")),
        "census must contain the p = 5 construction:\n{}",
        stdout(&out)
    );
}

#[test]
fn search_jsonl_rows_parse_and_match_csv_fields() {
    let out = linkform(&["search", "--bound", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rows = 0;
    for line in stdout(&out).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for field in ["a1", "a2", "a3", "b1", "b2", "b3", "n", "h4_order", "rho", "kappa", "verdict", "egs_prime"] {
            assert!(v.get(field).is_some(), "row missing {field}: {line}");
        }
        rows += 1;
    }
    assert!(rows > 0);
}

#[test]
fn search_writes_file_and_prints_summary() {
    let dir = std::env::temp_dir().join(format!("linkform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.csv");
    let out = linkform(&[
        "search",
        "--primes-to",
        "60",
        "--corollary",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("distinct |H4| orders"));
    let text = std::fs::read_to_string(&path).unwrap();
    // primes 5, 13, 17, 29, 37, 41, 53 ≤ 60 that are ≡ 1 mod 4
    assert_eq!(text.lines().count(), 1 + 7);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn search_unwritable_path_exits_4() {
    let out = linkform(&[
        "search",
        "--bound",
        "1",
        "--format",
        "csv",
        "--out",
        "/nonexistent-dir/rows.csv",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_passes_and_reports() {
    let out = linkform(&["verify", "--seed", "42", "--samples", "200"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("seed=42"));
    assert!(text.lines().filter(|l| l.trim_start().starts_with("PASS")).count() >= 7);
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_zero_samples_exits_2() {
    let out = linkform(&["verify", "--samples", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_limited_census_rows_are_marked_not_dropped() {
    let unlimited = linkform(&["search", "--bound", "5", "--format", "csv"]);
    let limited = Command::new(env!("CARGO_BIN_EXE_linkform"))
        .args(["search", "--bound", "5", "--format", "csv"])
        .env("LINKFORM_FACTOR_LIMIT", "1")
        .output()
        .expect("binary runs");
    assert_eq!(limited.status.code(), Some(0));
    let unlimited = stdout(&unlimited);
    let limited = stdout(&limited);
    // same census shape, with un-factorable rows marked instead of dropped
    assert_eq!(unlimited.lines().count(), limited.lines().count());
    assert!(limited.lines().any(|l| l.contains(",error,")), "{limited}");
    for (full, capped) in unlimited.lines().zip(limited.lines()) {
        let params = |l: &str| l.split(',').take(8).collect::<Vec<_>>().join(",");
        assert_eq!(params(full), params(capped));
    }
}

#[test]
fn factor_limit_env_var_forces_resource_exit() {
    let out = Command::new(env!("CARGO_BIN_EXE_linkform"))
        .args(["classify", "5,5,-7;5,-7,9"])
        .env("LINKFORM_FACTOR_LIMIT", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("resource"));
}
