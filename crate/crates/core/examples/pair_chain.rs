//! The three-state pair chain of two reverse walkers: its matrix, expected
//! coalescence times, and a simulated check of the mean from the split state.

use invasion_qsd::dual::{expected_absorption_times, pair_matrix, PairChainState};
use invasion_qsd::rng::replica_rng;

pub fn run() -> invasion_qsd::Result<()> {
    let (m, n) = (2, 3);
    let pm = pair_matrix(m, n)?;
    println!("p =");
    for row in &pm.p {
        println!("  {:.6} {:.6} {:.6}", row[0], row[1], row[2]);
    }
    println!("pbar = {:?}", pm.pbar);

    let (f1, f2, f3) = expected_absorption_times(m, n)?;
    println!("f = ({f1:.6}, {f2:.6}, {f3:.6})");

    let scale = ((m + n) * n * m) as f64;
    let replicas = 100_000u64;
    let total: u64 = (0..replicas)
        .map(|i| pm.sample_sigma(PairChainState::Split, &mut replica_rng(5, i)))
        .sum::<invasion_qsd::Result<u64>>()?;
    println!(
        "mean steps to coalesce from split: simulated {:.3}, predicted {:.3}",
        total as f64 / replicas as f64,
        scale * f3
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
