//! End-to-end checks of the command-line surface: subcommands, formats,
//! exit codes, and byte-level determinism of reports.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn write_input(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("choquet-cli-tests");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_choquet"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn classify_periodic_shift_report() {
    let input = write_input("periodic12.json", r#"{"type":"periodic_shift","weights":[1,2]}"#);
    let out = run(&["classify", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"circle_matrices\""));
    assert!(text.contains("\"p\":2"));
    assert!(text.contains("\"compact_operators\""));
}

#[test]
fn classify_is_byte_deterministic() {
    let input = write_input(
        "eg.json",
        r#"{"type":"matrix","data":[[[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0.6,0]]]}"#,
    );
    let a = run(&["classify", input.to_str().unwrap()]);
    let b = run(&["classify", input.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"block_sum\":[2,1]"));
}

#[test]
fn numrange_csv_shape() {
    let input = write_input("jordan.json", r#"{"type":"matrix","data":[[[0,0],[1,0]],[[0,0],[0,0]]]}"#);
    let out = run(&[
        "numrange",
        input.to_str().unwrap(),
        "--format",
        "csv",
        "--angles",
        "720",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert_eq!(lines[0], "theta,support,re,im");
    assert_eq!(lines.len(), 721);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("radius"));
}

#[test]
fn numrange_json_has_radius() {
    let input = write_input("jordan2.json", r#"{"type":"matrix","data":[[[0,0],[1,0]],[[0,0],[0,0]]]}"#);
    let out = run(&["numrange", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let r = v["radius"].as_f64().unwrap();
    assert!((r - 0.5).abs() < 1e-8);
}

#[test]
fn shift_verify_full_run() {
    let input = write_input("p123.json", r#"{"type":"periodic_shift","weights":[1,2,3]}"#);
    let out = run(&["shift-verify", input.to_str().unwrap(), "--grid", "60"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["spec"]["p"].as_u64(), Some(3));
    assert!(v["evidence"]["circle_checks"].as_array().unwrap().len() >= 1);
}

#[test]
fn shift_verify_undetermined_exits_three() {
    let input = write_input("p1122.json", r#"{"type":"periodic_shift","weights":[1,1,2,2]}"#);
    let out = run(&["shift-verify", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn decompose_reports_blocks() {
    let input = write_input(
        "eg2.json",
        r#"{"type":"direct_sum","blocks":[
            {"type":"matrix","data":[[[0,0],[1,0]],[[0,0],[0,0]]]},
            {"type":"matrix","data":[[[0.4,0]]]}
        ]}"#,
    );
    let out = run(&["decompose", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(
        v["decomposition"]["block_dims"],
        serde_json::json!([1, 2])
    );
}

#[test]
fn malformed_input_exits_one() {
    let input = write_input("bad.json", r#"{"type":"matrix","data":[[[0,0]],[[1,0]]]}"#);
    let out = run(&["classify", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("$.data"), "stderr: {stderr}");

    let missing = std::env::temp_dir().join("choquet-cli-tests/definitely-not-here.json");
    let out = run(&["classify", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_format_is_rejected_outside_numrange() {
    let input = write_input("p12b.json", r#"{"type":"periodic_shift","weights":[1,2]}"#);
    let out = run(&["classify", input.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_flag_writes_file() {
    let input = write_input("p12c.json", r#"{"type":"periodic_shift","weights":[1,2]}"#);
    let target = std::env::temp_dir().join("choquet-cli-tests/report-out.json");
    let _ = fs::remove_file(&target);
    let out = run(&[
        "classify",
        input.to_str().unwrap(),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&target).unwrap();
    assert!(text.contains("\"circle_matrices\""));
}

#[test]
fn unsupported_mixture_exits_one() {
    let input = write_input(
        "mix.json",
        r#"{"type":"direct_sum","blocks":[{"type":"unilateral_shift"},{"type":"matrix","data":[[[1,0]]]}]}"#,
    );
    let out = run(&["classify", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn symbolic_rules_classify() {
    let input = write_input("shiftsym.json", r#"{"type":"unilateral_shift"}"#);
    let out = run(&["classify", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"continuous_on_circle\""));
    assert!(text.contains("\"compact_operators\""));

    let input = write_input(
        "unitary.json",
        r#"{"type":"unitary","spectrum":[[1,0],[-1,0]]}"#,
    );
    let out = run(&["classify", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"finite_function_algebra\""));
}
