//! Runs the example programs that `cargo test` has already built. The
//! Monte-Carlo QSD example is left out: its default budget is the point of it.

use std::path::PathBuf;
use std::process::Command;

fn example_path(name: &str) -> PathBuf {
    // target/<profile>/deps/<this test> -> target/<profile>/examples/<name>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    profile_dir.join("examples").join(format!("{name}{}", std::env::consts::EXE_SUFFIX))
}

fn run_example(name: &str, args: &[&str]) -> String {
    let path = example_path(name);
    assert!(path.exists(), "example binary {} not built", path.display());
    let out = Command::new(&path).args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{name} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn survival_rates() {
    assert!(!run_example("survival_rates", &[]).is_empty());
}

#[test]
fn exact_qsd_writes_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nu.csv");
    run_example("exact_qsd", &["2", "7", path.to_str().unwrap()]);
    let csv = std::fs::read_to_string(path).unwrap();
    let rows = csv.lines().skip_while(|l| *l != "k,l,nu").skip(1).count();
    // (m+1)(n+1) minus the four corner states
    assert_eq!(rows, 3 * 8 - 4);
}

#[test]
fn pair_chain() {
    run_example("pair_chain", &[]);
}

#[test]
fn lumpability() {
    run_example("lumpability", &[]);
}

#[test]
fn duality() {
    run_example("duality", &[]);
}

#[test]
fn spectrum() {
    run_example("spectrum", &[]);
}

#[test]
fn limit_check() {
    run_example("limit_check", &[]);
}

#[test]
fn tail_regression() {
    run_example("tail_regression", &[]);
}
