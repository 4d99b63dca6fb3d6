//! The full 2^(m+n)-state chain lumps exactly onto the (k, l) counts: compare
//! block transition probabilities of every configuration with the induced
//! kernel.

use invasion_qsd::induced::lumpability_check;

pub fn run() -> invasion_qsd::Result<()> {
    for (m, n) in [(1, 3), (2, 3), (2, 5), (3, 6)] {
        let report = lumpability_check(m, n)?;
        println!("K_{{{m},{n}}}: {:>4} configurations, max defect {:.2e}", report.full_states, report.max_defect);
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
