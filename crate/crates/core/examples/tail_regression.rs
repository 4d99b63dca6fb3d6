//! Estimate the survival rate from simulated absorption times: simulate the
//! full opinion dynamics on K_{2,11}, fit a line to the log tail, and compare
//! with the exact value.

use invasion_qsd::dual::lambda_cmc_numeric;
use invasion_qsd::dynamics::{rho_invasion, survival_tail, OpinionConfig};
use invasion_qsd::estimators::{regress_lambda, DEFAULT_TRIM};
use invasion_qsd::graph::Graph;

pub fn run_with(m: usize, n: usize, replicas: u64) -> invasion_qsd::Result<()> {
    let graph = Graph::complete_bipartite(m, n)?;
    let rho = rho_invasion(&graph)?;
    let initial = OpinionConfig::bipartite_counts(&graph, 1, n.div_ceil(2))?;
    let exact = lambda_cmc_numeric(m, n)?;
    let horizon = (12.0 / (1.0 - exact)) as u64;

    let tail = survival_tail(&graph, &rho, &initial, horizon, replicas, 2024)?;
    let fit = regress_lambda(&tail.p_hat(), DEFAULT_TRIM)?;
    println!("{replicas} paths on K_{{{m},{n}}}, horizon {horizon}");
    println!("  fitted over t in {:?} ({} points)", fit.t_range, fit.points_kept);
    println!("  lambda_hat = {:.6}, exact = {exact:.6}", fit.lambda_hat);
    println!("  (1 - lambda_hat)/(1 - lambda) = {:.4}", (1.0 - fit.lambda_hat) / (1.0 - exact));
    Ok(())
}

pub fn run() -> invasion_qsd::Result<()> {
    run_with(2, 11, 20_000)
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_with(2, 11, 100_000) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
