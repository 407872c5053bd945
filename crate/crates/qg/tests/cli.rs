use std::path::PathBuf;
use std::process::{Command, Output};

fn qg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qg"))
        .args(args)
        .current_dir(workspace_root())
        .env_remove("QG_MAX_ORDER")
        .output()
        .expect("qg runs")
}

fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_table(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("qg-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn analyze_z9_reports_medial() {
    let o = qg(&["analyze", "fixtures/z9.tbl"]);
    assert_eq!(o.status.code(), Some(0));
    let holds = stdout(&o).lines().find(|l| l.starts_with("holds:")).unwrap().to_string();
    assert!(holds.split_whitespace().any(|w| w == "medial"), "{holds}");
}

#[test]
fn analyze_json_has_the_same_facts() {
    let o = qg(&["analyze", "fixtures/z9.tbl", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v["results"][0];
    assert_eq!(r["classes"]["medial"], true);
    assert_eq!(r["classes"]["leftF"], true);
    assert_eq!(r["localMaps"]["s"]["permutation"], true);
    assert_eq!(v["exitCode"], 0);
}

#[test]
fn non_latin_file_exits_one_with_diagnostic() {
    let p = temp_table("bad.tbl", "2\n0 0\n1 1\n");
    let o = qg(&["analyze", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("row 0 repeats entry 0"), "{}", stderr(&o));
}

#[test]
fn malformed_file_exits_two() {
    let p = temp_table("malformed.tbl", "2\n0 1\n1\n");
    assert_eq!(qg(&["analyze", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qg(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qg(&["analyze", "--no-such-flag", "fixtures/z9.tbl"]).status.code(), Some(2));
    assert_eq!(qg(&["search", "--order", "3", "--require", "notAFlag"]).status.code(), Some(2));
    assert_eq!(qg(&["analyze"]).status.code(), Some(2));
}

#[test]
fn paper_verify_passes() {
    let o = qg(&["paper-verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    assert!(stdout(&o).lines().last().unwrap().ends_with(" 0 failed"));
}

#[test]
fn search_counts_and_bounds() {
    let o = qg(&["search", "--order", "4"]);
    assert_eq!(stdout(&o).trim(), "576");
    let o = qg(&["search", "--order", "3", "--require", "idempotent,leftDistributive", "--mode", "enumerate"]);
    assert_eq!(stdout(&o), "# table 1\n3\n0 2 1\n2 1 0\n1 0 2\n");
    assert_eq!(qg(&["search", "--order", "9"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_qg"))
        .args(["search", "--order", "6", "--require", "leftF", "--mode", "first"])
        .env("QG_MAX_ORDER", "6")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# table 1\n6\n"));
}

#[test]
fn enumerated_tables_round_trip_through_analyze() {
    let o = qg(&["search", "--order", "4", "--require", "leftSM", "--mode", "enumerate", "--limit", "5"]);
    let p = temp_table("many.tbl", &stdout(&o));
    let a = qg(&["analyze", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 5);
    assert!(results.iter().all(|r| r["classes"]["leftSM"] == true));
}

#[test]
fn decompose_reports_each_class() {
    let o = qg(&["decompose", "fixtures/z4-x-plus-3y.tbl", "--class", "left-F"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("left-F: e-chain {0,1,2,3} > {0} m = 1"), "{}", stdout(&o));
    let o = qg(&["decompose", "fixtures/z4-x-plus-3y.tbl", "--class", "CML"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("commutative Moufang"));
}

#[test]
fn congruences_and_autotopisms() {
    let o = qg(&["congruences", "fixtures/z7-2x-3y.tbl"]);
    assert!(stdout(&o).contains("2 congruences, simple true"));
    let o = qg(&["autotopisms", "fixtures/d8-group.tbl", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"][0]["autotopisms"], 512);
    assert_eq!(v["results"][0]["automorphisms"], 8);
}
