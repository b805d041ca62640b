use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn truematch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_truematch")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn lines(labels: &[&str]) -> String {
    labels.iter().map(|l| format!("{l}\n")).collect()
}

/// Labelings whose table is [[98,1],[1,0]].
fn outlier_files(dir: &Path) -> (String, String) {
    let mut a = vec!["n"; 100];
    let mut b = vec!["n"; 100];
    a[7] = "o";
    b[42] = "o";
    (
        write(dir, "a.txt", &lines(&a)).to_string_lossy().into_owned(),
        write(dir, "b.txt", &lines(&b)).to_string_lossy().into_owned(),
    )
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn match_swaps_the_outlier_table() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = outlier_files(dir.path());
    let v = json(&truematch(&["match", &a, &b, "--seed", "3"]));
    assert_eq!(v["perm"], serde_json::json!([2, 1]));
    assert_eq!(v["table_before"], serde_json::json!([[98, 1], [1, 0]]));
    assert_eq!(v["table_after"], serde_json::json!([[1, 98], [0, 1]]));
    assert_eq!(v["seed"], 3);
    assert_eq!(v["method"], "truematch");
    assert_eq!(v["categories_a"], serde_json::json!(["n", "o"]));
    assert_eq!(v["signed_residuals"][0][0], -1.0203e-6);

    let v = json(&truematch(&["match", &a, &b, "--method", "tracemax"]));
    assert_eq!(v["perm"], serde_json::json!([1, 2]));
    assert_eq!(v["seed"], truematch::cli::DEFAULT_SEED);
}

#[test]
fn agree_reports_all_indices() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = outlier_files(dir.path());
    let v = json(&truematch(&["agree", &a, &b]));
    assert_eq!(v["N"], 100);
    assert_eq!(v["K"], 2);
    assert_eq!(v["diagonal"], 0.98);
    assert_eq!(v["kappa"], -0.010101);
    assert_eq!(v["rand"], 0.960404);
}

#[test]
fn mismatched_lengths_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "1\n2\n1\n");
    let b = write(dir.path(), "b.txt", "1\n2\n");
    let out = truematch(&["match", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("a.txt") && err.contains("b.txt"), "{err}");
}

#[test]
fn malformed_inputs_exit_2_naming_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "gap.txt", "1\n\n2\n");
    let b = write(dir.path(), "ok.txt", "1\n2\n1\n");
    let out = truematch(&["agree", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("gap.txt") && err.contains("line 2"), "{err}");

    let data = write(dir.path(), "data.csv", "x,y\n1,2\n3,oops\n");
    let out = truematch(&["mmcc", data.to_str().unwrap(), "--k", "2", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("data.csv") && err.contains("line 3"), "{err}");

    let out = truematch(&["simulate", "--p-grid", "0.5,1.5", "--kappa-grid", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = truematch(&["agree", "/nonexistent/labels.txt", b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mmcc_writes_probabilities_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let rows: String = (0..40).map(|i| format!("{}\n", if i < 20 { i as f64 * 0.01 } else { 50.0 + i as f64 * 0.01 })).collect();
    let data = write(dir.path(), "blobs.csv", &rows);
    let out_dir = dir.path().join("out");
    let out = truematch(&[
        "mmcc",
        data.to_str().unwrap(),
        "--k",
        "2",
        "--rounds",
        "30",
        "-o",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let probs = std::fs::read_to_string(out_dir.join("probs.csv")).unwrap();
    assert_eq!(probs.lines().next(), Some("p1,p2"));
    assert_eq!(probs.lines().count(), 41);
    let stats: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("stats.json")).unwrap()).unwrap();
    assert_eq!(stats["H"], 0.0);
    assert_eq!(stats["rounds_run"], 30);
}

#[test]
fn simulate_grid_streams_csv() {
    let out = truematch(&[
        "simulate",
        "--p-grid",
        "0.5,0.9",
        "--kappa-grid",
        "0:1:0.5",
        "--rounds",
        "30",
        "--seed",
        "4",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], truematch::simulate::GRID_HEADER);
    assert_eq!(rows.len(), 7);
    assert!(rows[1].starts_with("0.5,0,"));
    assert!(rows[6].starts_with("0.9,1,"));
    for (i, row) in rows[1..].iter().enumerate() {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 9);
        assert_eq!(fields[6..8], ["false", "truematch"]);
        assert_eq!(fields[8], truematch::simulate::cell_seed(4, i / 3, i % 3).to_string());
    }
}

#[test]
fn simulate_outlier_echoes_seed() {
    let v = json(&truematch(&["simulate", "--scenario", "outlier", "--runs", "200", "--seed", "9"]));
    assert_eq!(v["seed"], 9);
    assert_eq!(v["runs"], 200);
    assert!(v["expected"]["diagonal"].as_f64().unwrap() < 0.1);
}
