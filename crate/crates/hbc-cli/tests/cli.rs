//! End-to-end checks of the command surface: output formats, exit codes,
//! and byte-stable artifacts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hbc"))
}

fn samples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hbc-cli-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn validate_passes_on_good_channel() {
    let out = bin()
        .args(["validate"])
        .arg(samples().join("channel_identity.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("result=PASS"));
    assert!(text.contains("completeness_residual="));
}

#[test]
fn validate_fails_on_bad_norm_with_named_index() {
    let dir = tmp_dir("badnorm");
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{
          "format_version": 1, "d_A": 2, "d_C": 2,
          "povm_vectors": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]],
          "output_states": [[[1.0,0.0],[0.0,0.0]],[[0.9,0.0],[0.0,0.0]]]
        }"#,
    )
    .unwrap();
    let out = bin().args(["validate"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("result=FAIL"));
    assert!(text.contains("state_norm[1]=0.9"));
    assert!(stderr(&out).starts_with("error[validation]:"));
}

#[test]
fn validate_reports_completeness_residual() {
    let dir = tmp_dir("dup");
    let path = dir.join("dup.json");
    std::fs::write(
        &path,
        r#"{
          "format_version": 1, "d_A": 2, "d_C": 2,
          "povm_vectors": [[[1.0,0.0],[0.0,0.0]],[[1.0,0.0],[0.0,0.0]]],
          "output_states": [[[1.0,0.0],[0.0,0.0]],[[1.0,0.0],[0.0,0.0]]]
        }"#,
    )
    .unwrap();
    let out = bin().args(["validate"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("completeness_residual=1.000000e0"));
}

#[test]
fn malformed_json_exits_2() {
    let dir = tmp_dir("malformed");
    let path = dir.join("nope.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = bin().args(["validate"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[parse]:"));
}

#[test]
fn missing_file_exits_2() {
    let out = bin()
        .args(["validate", "/definitely/not/here.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[io]:"));
}

#[test]
fn wrong_format_version_exits_2() {
    let dir = tmp_dir("version");
    let path = dir.join("v9.json");
    std::fs::write(
        &path,
        r#"{
          "format_version": 9, "d_A": 2, "d_C": 2,
          "povm_vectors": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]],
          "output_states": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]
        }"#,
    )
    .unwrap();
    let out = bin().args(["validate"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("format_version"));
}

#[test]
fn degrade_check_passes() {
    let out = bin()
        .args(["degrade-check"])
        .arg(samples().join("channel_zero_plus.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("choi_residual="));
    assert!(text.contains("result=PASS"));
}

#[test]
fn evaluate_prints_rate_triple() {
    let out = bin()
        .args(["evaluate"])
        .arg(samples().join("channel_identity.json"))
        .arg(samples().join("ensemble_cc_uniform.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("primary_rate=1.000000000"));
    assert!(text.contains("charlie_rate_c=0.000000000"));
    assert!(text.contains("sum_rate=1.000000000"));
}

#[test]
fn evaluate_eac_bell_pair_gives_two_bits() {
    let out = bin()
        .args(["evaluate"])
        .arg(samples().join("channel_identity.json"))
        .arg(samples().join("ensemble_eac_bell.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("primary_rate=2.000000000"));
    assert!(!text.contains("sum_rate="));
}

#[test]
fn evaluate_rejects_dim_mismatch() {
    let dir = tmp_dir("mismatch");
    let path = dir.join("qutrit_ensemble.json");
    std::fs::write(
        &path,
        r#"{
          "task": "cc",
          "entries": [ { "w": 0, "z": 0, "p": 1.0, "state": [[1.0,0.0],[0.0,0.0],[0.0,0.0]] } ]
        }"#,
    )
    .unwrap();
    let out = bin()
        .args(["evaluate"])
        .arg(samples().join("channel_identity.json"))
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[validation]:"));
}

#[test]
fn frontier_emits_stable_csv() {
    let args = [
        "frontier".to_string(),
        samples()
            .join("channel_identity.json")
            .to_string_lossy()
            .into_owned(),
        "--task".into(),
        "cc".into(),
        "--num-w".into(),
        "1".into(),
        "--num-z".into(),
        "2".into(),
        "--lambdas".into(),
        "3".into(),
        "--restarts".into(),
        "2".into(),
        "--max-iters".into(),
        "400".into(),
        "--seed".into(),
        "5".into(),
    ];
    let first = bin().args(&args).output().unwrap();
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    let text = stdout(&first);
    assert!(text.starts_with("lambda,rate_b,rate_c\n"));
    assert!(text.lines().count() >= 2);

    let mut again = bin();
    again.args(&args).args(["--workers", "3"]);
    let second = again.output().unwrap();
    assert_eq!(stdout(&first), stdout(&second), "CSV must be byte-stable");
}

#[test]
fn frontier_writes_csv_and_svg_files() {
    let dir = tmp_dir("artifacts");
    let csv = dir.join("frontier.csv");
    let svg = dir.join("frontier.svg");
    let out = bin()
        .args(["frontier"])
        .arg(samples().join("channel_identity.json"))
        .args([
            "--task",
            "cc",
            "--num-w",
            "1",
            "--num-z",
            "2",
            "--lambdas",
            "2",
            "--restarts",
            "1",
            "--max-iters",
            "200",
        ])
        .arg("--out")
        .arg(&csv)
        .arg("--plot")
        .arg(&svg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("lambda,rate_b,rate_c\n"));
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert!(svg_text.contains("</svg>"));
}

#[test]
fn oracle_runs_on_embedded_channel() {
    let out = bin()
        .args(["oracle"])
        .arg(samples().join("channel_noiseless.json"))
        .args(["--grid", "8"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("lambda,rate_b,rate_c\n"));
    // Oracle rows carry the sentinel weight.
    assert!(text.contains("-1.000000000,"));
}

#[test]
fn oracle_rejects_non_classical_channel_with_exit_3() {
    let out = bin()
        .args(["oracle"])
        .arg(samples().join("channel_zero_plus.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error[domain]:"));
}

#[test]
fn frontier_rejects_unknown_task() {
    let out = bin()
        .args(["frontier"])
        .arg(samples().join("channel_identity.json"))
        .args(["--task", "qq"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[parse]:"));
}
