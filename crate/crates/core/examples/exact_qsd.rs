//! Exact QSD of the induced chain by power iteration, written as a CSV table
//! and summarized by its marginals.
//!
//! Usage: `cargo run --example exact_qsd -- [m] [n] [out.csv]`

use std::path::PathBuf;

use invasion_qsd::io::write_atomic;
use invasion_qsd::spectral::{build_s, perron_left, write_qsd_csv, PerronOptions};

pub fn run_with(m: usize, n: usize, out: Option<PathBuf>) -> invasion_qsd::Result<()> {
    let s = build_s(m, n)?;
    let perron = perron_left(&s, PerronOptions::default())?;
    println!(
        "K_{{{m},{n}}}: {} transient states, lambda = {:.15}, {} sweeps, residual {:.1e}",
        s.dim(),
        perron.lambda,
        perron.iterations,
        perron.residual
    );

    let mut by_k = vec![0.0; m + 1];
    for (st, p) in s.states().iter().zip(&perron.left_vector) {
        by_k[st.k] += p;
    }
    for (k, p) in by_k.iter().enumerate() {
        println!("  P(k = {k}) = {p:.6}");
    }

    if let Some(path) = out {
        write_atomic(&path, |w| write_qsd_csv(w, s.states(), &perron.left_vector))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn run() -> invasion_qsd::Result<()> {
    run_with(2, 11, None)
}

#[allow(dead_code)]
fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m = args.first().and_then(|a| a.parse().ok()).unwrap_or(2);
    let n = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(11);
    if let Err(e) = run_with(m, n, args.get(2).map(PathBuf::from)) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
