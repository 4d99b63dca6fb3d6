//! The two Monte-Carlo QSD estimators against the exact QSD on K_{2,11}:
//! a single chain restarted from its own occupation measure, and many
//! chains conditioned on survival.

use invasion_qsd::cli::{conditioning_time, figure_initial_state};
use invasion_qsd::estimators::{
    default_burn_in, estimate_qsd_conditional, estimate_qsd_restart, tv_distance,
};
use invasion_qsd::induced::InducedKernel;
use invasion_qsd::rng::seeded;
use invasion_qsd::spectral::{build_s, perron_left, PerronOptions};

pub fn run_with(m: usize, n: usize, steps: u64, replicas: u64) -> invasion_qsd::Result<()> {
    let kernel = InducedKernel::new(m, n)?;
    let exact = perron_left(&build_s(m, n)?, PerronOptions::default())?.left_vector;
    let initial = figure_initial_state(m, n);

    let restart = estimate_qsd_restart(&kernel, initial, steps, default_burn_in(steps), &mut seeded(7))?;
    println!("restart, {steps} steps: TV to exact = {:.4}", restart.tv_distance(&exact)?);

    let t_star = conditioning_time(m, n, initial, 0.1)?;
    let conditional = estimate_qsd_conditional(&kernel, initial, t_star, replicas, 7)?;
    println!(
        "conditional, {replicas} replicas to t = {t_star} ({} survived): TV to exact = {:.4}",
        conditional.total(),
        conditional.tv_distance(&exact)?
    );
    println!(
        "TV between the estimators = {:.4}",
        tv_distance(&restart.probabilities(), &conditional.probabilities())
    );
    Ok(())
}

pub fn run() -> invasion_qsd::Result<()> {
    run_with(2, 11, 1_000_000, 50_000)
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_with(2, 11, 10_000_000, 1_000_000) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
