//! Eigenvalues of a dense real matrix: Householder reduction to upper
//! Hessenberg form followed by Francis double-shift QR.
//!
//! Diagnostic grade: eigenvalues agree with the Perron iteration to about
//! 1e-8, not to the 1e-13 of the QSD solver.

use num_complex::Complex64;

use super::matrix::SubstochasticMatrix;
use crate::error::{Error, Result};

/// Largest dimension accepted by [`full_spectrum`].
pub const SPECTRUM_DIM_CAP: usize = 500;

const MAX_QR_SWEEPS: usize = 60;

/// All eigenvalues, sorted by real part (then imaginary part) descending.
pub fn full_spectrum<L>(matrix: &SubstochasticMatrix<L>) -> Result<Vec<Complex64>> {
    let dim = matrix.dim();
    if dim > SPECTRUM_DIM_CAP {
        return Err(Error::SizeCap {
            what: "dense eigenvalue solver",
            requested: dim as u128,
            cap: SPECTRUM_DIM_CAP as u128,
        });
    }
    eigenvalues(matrix.entries(), dim)
}

/// Eigenvalues of a general row-major `dim x dim` matrix.
pub fn eigenvalues(entries: &[f64], dim: usize) -> Result<Vec<Complex64>> {
    assert_eq!(entries.len(), dim * dim);
    let mut h = entries.to_vec();
    reduce_to_hessenberg(&mut h, dim);
    let mut eigs = hessenberg_qr(h, dim)?;
    eigs.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(eigs)
}

/// In-place similarity reduction `A -> Q^T A Q` with `Q` a product of
/// Householder reflectors. Entries below the subdiagonal are zeroed.
fn reduce_to_hessenberg(a: &mut [f64], n: usize) {
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    for k in 0..n - 2 {
        let norm = (k + 1..n).map(|i| a[i * n + k].powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let alpha = if x0 > 0.0 { -norm } else { norm };
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] -= alpha;
        let vnorm = (k + 1..n).map(|i| v[i] * v[i]).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for x in &mut v[k + 1..n] {
            *x /= vnorm;
        }
        // A <- (I - 2 v v^T) A on rows k+1..n
        for j in k..n {
            let dot: f64 = (k + 1..n).map(|i| v[i] * a[i * n + j]).sum();
            for i in k + 1..n {
                a[i * n + j] -= 2.0 * v[i] * dot;
            }
        }
        // A <- A (I - 2 v v^T) on columns k+1..n
        for i in 0..n {
            let dot: f64 = (k + 1..n).map(|j| a[i * n + j] * v[j]).sum();
            for j in k + 1..n {
                a[i * n + j] -= 2.0 * dot * v[j];
            }
        }
        a[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            a[i * n + k] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix, eigenvalues only.
/// Follows the classic EISPACK `hqr` layout; indices are 1-based internally.
fn hessenberg_qr(h: Vec<f64>, n: usize) -> Result<Vec<Complex64>> {
    let stride = n + 1;
    let mut a = vec![0.0; stride * stride];
    for i in 0..n {
        for j in 0..n {
            a[(i + 1) * stride + j + 1] = h[i * n + j];
        }
    }
    let at = |i: usize, j: usize| i * stride + j;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[at(i, j)].abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = nn;
            while l >= 2 {
                let mut s = a[at(l - 1, l - 1)].abs() + a[at(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[at(l, l - 1)].abs() + s == s {
                    a[at(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[at(nn, nn)];
            if l == nn {
                // One root found.
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            y = a[at(nn - 1, nn - 1)];
            w = a[at(nn, nn - 1)] * a[at(nn - 1, nn)];
            if l == nn - 1 {
                // Two roots found.
                p = 0.5 * (y - x);
                q = p * p + w;
                z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + z.copysign(p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn -= 2;
                break;
            }
            if its == MAX_QR_SWEEPS {
                return Err(Error::NonConvergence {
                    iterations: its as u64,
                    residual: a[at(nn, nn - 1)].abs(),
                });
            }
            if its > 0 && its % 10 == 0 {
                // Exceptional shift.
                t += x;
                for i in 1..=nn {
                    a[at(i, i)] -= x;
                }
                let s = a[at(nn, nn - 1)].abs() + a[at(nn - 1, nn - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            // Look for two consecutive small subdiagonal elements.
            let mut m = nn - 2;
            loop {
                z = a[at(m, m)];
                r = x - z;
                let s0 = y - z;
                p = (r * s0 - w) / a[at(m + 1, m)] + a[at(m, m + 1)];
                q = a[at(m + 1, m + 1)] - z - r - s0;
                r = a[at(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[at(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[at(m - 1, m - 1)].abs() + z.abs() + a[at(m + 1, m + 1)].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                a[at(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[at(i, i - 3)] = 0.0;
                }
            }
            // Double QR step on rows l..nn and columns m..nn.
            let mut k = m;
            while k + 1 <= nn {
                if k != m {
                    p = a[at(k, k - 1)];
                    q = a[at(k + 1, k - 1)];
                    r = if k != nn - 1 { a[at(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[at(k, k - 1)] = -a[at(k, k - 1)];
                        }
                    } else {
                        a[at(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        let mut pp = a[at(k, j)] + q * a[at(k + 1, j)];
                        if k != nn - 1 {
                            pp += r * a[at(k + 2, j)];
                            a[at(k + 2, j)] -= pp * z;
                        }
                        a[at(k + 1, j)] -= pp * y;
                        a[at(k, j)] -= pp * x;
                    }
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        let mut pp = x * a[at(i, k)] + y * a[at(i, k + 1)];
                        if k != nn - 1 {
                            pp += z * a[at(i, k + 2)];
                            a[at(i, k + 2)] -= pp * r;
                        }
                        a[at(i, k + 1)] -= pp * q;
                        a[at(i, k)] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

/// Structure observed in the spectrum of the induced chain, reported but
/// never asserted.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SpectrumDiagnostics {
    pub count: usize,
    pub max_abs_imag: f64,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub midpoint: f64,
    /// `max_i |lambda_i - (lambda_max + lambda_min - lambda_{N+1-i})|` over the
    /// real parts sorted descending.
    pub reflection_distance: f64,
}

pub fn spectrum_diagnostics(eigs: &[Complex64]) -> SpectrumDiagnostics {
    let mut re: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    re.sort_by(|a, b| b.total_cmp(a));
    let lambda_max = re[0];
    let lambda_min = re[re.len() - 1];
    let reflected = reflect(&re);
    let reflection_distance = re
        .iter()
        .zip(&reflected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    SpectrumDiagnostics {
        count: eigs.len(),
        max_abs_imag: eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
        lambda_max,
        lambda_min,
        midpoint: 0.5 * (lambda_max + lambda_min),
        reflection_distance,
    }
}

/// Reflection of descending-sorted values about their midrange, re-sorted
/// descending.
pub fn reflect(sorted_desc: &[f64]) -> Vec<f64> {
    let sum = sorted_desc[0] + sorted_desc[sorted_desc.len() - 1];
    sorted_desc.iter().rev().map(|x| sum - x).collect()
}
