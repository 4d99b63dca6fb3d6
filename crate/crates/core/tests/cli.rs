use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_invasion-qsd"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn invasion-qsd")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn bad_sizes_and_arguments_exit_2() {
    assert_eq!(run(&["lambda", "-m", "5", "-n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["lambda", "-m", "1", "-n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["lambda", "-m", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["tail", "-m", "2", "-n", "5", "--trim", "0.7"]).status.code(), Some(2));
}

#[test]
fn help_exits_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn oversized_spectrum_exits_4() {
    let out = run(&["spectrum", "-m", "10", "-n", "100"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn lambda_json_agrees_across_routes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lambda.json");
    let out = run(&["lambda", "-m", "2", "-n", "5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&path);
    assert_eq!(v["meta"]["command"], "lambda");
    let pair = v["report"]["pair_chain"]["lambda_numeric"].as_f64().unwrap();
    let spectral = v["report"]["spectral"]["lambda"].as_f64().unwrap();
    assert!((pair - spectral).abs() < 1e-12);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (i, threads) in ["1", "1", "3"].iter().enumerate() {
        let path = dir.path().join(format!("qsd{i}.csv"));
        let out = run(&[
            "qsd", "-m", "2", "-n", "6", "--method", "conditional", "--replicas", "5000",
            "--seed", "17", "--threads", threads, "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[0], files[2]);
    let text = String::from_utf8(files.swap_remove(0)).unwrap();
    assert!(text.lines().any(|l| l == "k,l,nu"));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"n": 7}"#).unwrap();
    let path = dir.path().join("out.json");
    let out = run(&[
        "lambda", "-m", "2", "-n", "5", "--config", cfg.to_str().unwrap(), "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(json(&path)["meta"]["n"], 7);

    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    let out = run(&["lambda", "-m", "2", "-n", "5", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tail_writes_regression_beside_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tail.csv");
    let out = run(&["tail", "-m", "2", "-n", "5", "--replicas", "2000", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.lines().any(|l| l == "t,survivors,p_hat"));
    let reg = json(&dir.path().join("tail.regression.json"));
    let hat = reg["report"]["regression"]["lambda_hat"].as_f64().unwrap();
    assert!(hat > 0.9 && hat < 1.0);
}
