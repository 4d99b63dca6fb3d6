//! Substochastic matrices of the induced chain and the linear algebra run on
//! them: Perron root and left eigenvector (the exact QSD), the full spectrum,
//! and expected absorption times.

mod eigen;
mod linsolve;
mod matrix;
mod perron;

pub use eigen::{
    eigenvalues, full_spectrum, reflect, spectrum_diagnostics, SpectrumDiagnostics,
    SPECTRUM_DIM_CAP,
};
pub use linsolve::{expected_absorption_fundamental, lu_solve};
pub use matrix::{
    build_s, build_s_capped, write_qsd_csv, SubstochasticMatrix, DEFAULT_DIM_CAP,
    ROW_SUM_TOLERANCE,
};
pub use perron::{
    is_irreducible, perron_left, perron_left_from, perron_left_warm, PerronOptions, PerronResult,
};

use std::io::{self, Write};

use num_complex::Complex64;

use crate::io::fmt_f64;

/// Spectrum table: `re,im`.
pub fn write_spectrum_csv<W: Write>(mut w: W, eigs: &[Complex64]) -> io::Result<()> {
    writeln!(w, "re,im")?;
    for z in eigs {
        writeln!(w, "{},{}", fmt_f64(z.re), fmt_f64(z.im))?;
    }
    Ok(())
}
