//! How far the exact QSD on K_{m,n} is from its large-n limit, and the
//! identities used to identify that limit.

use invasion_qsd::limit::{
    compare_grid_to_limit, exact_qsd_grid, sl_decompose, solve_ode, stein_check, taylor_identity_check,
    SteinMeasure,
};

pub fn run() -> invasion_qsd::Result<()> {
    let m = 2;
    println!("{:>4} {:>10} {:>10} {:>10} {:>10} {:>12}", "n", "KS unif", "KS beta", "TV binom", "SL resid", "Taylor*n^3");
    for n in [20, 50, 100] {
        let (grid, lambda) = exact_qsd_grid(m, n)?;
        let d = compare_grid_to_limit(&grid);
        let sl = sl_decompose(&grid, lambda)?;
        let taylor = taylor_identity_check(&grid, lambda, |x| x.powi(3), |x| 3.0 * x * x, |x| 6.0 * x);
        println!(
            "{n:>4} {:>10.5} {:>10.5} {:>10.5} {:>10.2e} {:>12.5}",
            d.ks_marginal,
            d.max_ks_beta(),
            d.max_tv_binomial(),
            sl.residual,
            taylor.scaled_gap
        );
    }

    // The uniform law satisfies the Stein identity; the QSD marginal nearly does.
    let (grid, _) = exact_qsd_grid(m, 100)?;
    let marginal = grid.second_marginal();
    let f = |x: f64| x.powi(4);
    let f2 = |x: f64| 12.0 * x * x;
    println!("\nStein gap for x^4: uniform {:.2e}, QSD marginal {:.2e}",
        stein_check(f, f2, SteinMeasure::Uniform).gap,
        stein_check(f, f2, SteinMeasure::Discrete(&marginal)).gap);

    let bump = |x: f64| {
        let s = (x - 0.5) / 0.2;
        if s.abs() < 1.0 { (-1.0 / (1.0 - s * s)).exp() } else { 0.0 }
    };
    let sol = solve_ode(bump, (0.3, 0.7))?;
    println!("ODE solution: f(0) + f(1) = {:.10}, f(1/2) = {:.10}", sol.value(0.0) + sol.value(1.0), sol.value(0.5));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
