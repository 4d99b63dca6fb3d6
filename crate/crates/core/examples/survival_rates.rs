//! Survival rate of the Invasion model on K_{m,n} by every available route:
//! the 3x3 pair chain, the m = 1 closed form, the leading-order asymptotic,
//! and the Perron root of the full induced matrix.

use invasion_qsd::dual::{lambda_asymptotic, lambda_closed_m1, lambda_cmc_numeric, lambda_voter};
use invasion_qsd::spectral::{build_s, perron_left, PerronOptions};

pub fn run() -> invasion_qsd::Result<()> {
    println!("{:>3} {:>4} {:>20} {:>20} {:>20} {:>11}", "m", "n", "pair chain", "induced Perron", "asymptotic", "(1-l)n^3/2m");
    for (m, n) in [(1, 3), (2, 3), (2, 11), (3, 15), (4, 20), (2, 50)] {
        let pair = lambda_cmc_numeric(m, n)?;
        let perron = perron_left(&build_s(m, n)?, PerronOptions::default())?.lambda;
        println!(
            "{m:>3} {n:>4} {pair:>20.15} {perron:>20.15} {:>20.15} {:>11.6}",
            lambda_asymptotic(m, n),
            (1.0 - pair) * (n as f64).powi(3) / (2.0 * m as f64)
        );
    }

    println!("\nm = 1 closed form against the 2x2 pair chain:");
    for n in [3, 10, 100, 1000] {
        let closed = lambda_closed_m1(n)?;
        println!("  n={n:<5} closed={closed:.17} |diff|={:.2e}", (closed - lambda_cmc_numeric(1, n)?).abs());
    }

    println!("\nOn K_{{m,m}} the Invasion and Voter rates coincide:");
    for m in [2, 5, 9] {
        println!("  m={m}: {:.15} vs {:.15}", lambda_cmc_numeric(m, m)?, lambda_voter(m, m));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
