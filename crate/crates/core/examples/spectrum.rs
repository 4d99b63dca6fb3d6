//! Full spectrum of the induced matrix on K_{4,20}: 101 eigenvalues, their
//! imaginary parts, and the distance to their reflection about the midpoint.

use invasion_qsd::spectral::{build_s, full_spectrum, perron_left, spectrum_diagnostics, PerronOptions};

pub fn run() -> invasion_qsd::Result<()> {
    let (m, n) = (4, 20);
    let s = build_s(m, n)?;
    let eigs = full_spectrum(&s)?;
    let diag = spectrum_diagnostics(&eigs);
    let perron = perron_left(&s, PerronOptions::default())?;
    println!("{} eigenvalues", diag.count);
    println!("largest {:.12} (Perron {:.12})", diag.lambda_max, perron.lambda);
    println!("smallest {:.12}, midpoint {:.12}", diag.lambda_min, diag.midpoint);
    println!("max |im| = {:.3e}", diag.max_abs_imag);
    println!("distance to midpoint reflection = {:.3e}", diag.reflection_distance);

    // Gaps larger than the typical spacing separate the groups of the spectrum.
    let re: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    let spacing = (re[0] - re[re.len() - 1]) / (re.len() - 1) as f64;
    let gaps: Vec<usize> = re.windows(2).enumerate().filter(|(_, w)| w[0] - w[1] > 3.0 * spacing).map(|(i, _)| i + 1).collect();
    println!("large gaps after positions {gaps:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
