use std::collections::VecDeque;

use super::matrix::{SparseRows, SubstochasticMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerronOptions {
    /// Stop once `max |nu S - lambda nu| <= tol`.
    pub tol: f64,
    pub max_iter: u64,
}

impl Default for PerronOptions {
    fn default() -> Self {
        PerronOptions {
            tol: 1e-13,
            max_iter: 10_000_000,
        }
    }
}

/// Perron root and normalized left eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronResult {
    pub lambda: f64,
    /// Probability vector over the matrix's states: the QSD.
    pub left_vector: Vec<f64>,
    pub iterations: u64,
    /// `max |nu S - lambda nu|` for the returned pair.
    pub residual: f64,
    /// Whether the positive pattern was strongly connected. Uniqueness of the
    /// result is only guaranteed when it is.
    pub irreducible: bool,
}

/// Left power iteration from the uniform vector.
pub fn perron_left<L>(matrix: &SubstochasticMatrix<L>, opts: PerronOptions) -> Result<PerronResult> {
    let start = vec![1.0 / matrix.dim() as f64; matrix.dim()];
    perron_left_from(matrix, &start, opts)
}

/// Left power iteration from a caller-supplied nonnegative start vector.
///
/// Each sweep forms `w = nu S`, takes `lambda = sum(w)` (valid because `nu` is
/// a probability vector and `S` is nonnegative) and renormalizes.
pub fn perron_left_from<L>(
    matrix: &SubstochasticMatrix<L>,
    start: &[f64],
    opts: PerronOptions,
) -> Result<PerronResult> {
    let dim = matrix.dim();
    if start.len() != dim {
        return Err(Error::invalid("start vector has the wrong length"));
    }
    let mass: f64 = start.iter().sum();
    if start.iter().any(|&x| !(x >= 0.0)) || !(mass > 0.0) {
        return Err(Error::invalid("start vector must be nonnegative and nonzero"));
    }
    let sparse = matrix.sparse_rows();
    let irreducible = strongly_connected(&sparse, dim);

    let mut nu: Vec<f64> = start.iter().map(|x| x / mass).collect();
    let mut w = vec![0.0; dim];
    let mut residual = f64::INFINITY;
    for iteration in 1..=opts.max_iter {
        sparse.left_mul(&nu, &mut w);
        let lambda: f64 = w.iter().sum();
        if !(lambda > 0.0) {
            return Err(Error::NonConvergence {
                iterations: iteration,
                residual: f64::NAN,
            });
        }
        residual = w
            .iter()
            .zip(&nu)
            .map(|(wi, vi)| (wi - lambda * vi).abs())
            .fold(0.0, f64::max);
        if residual <= opts.tol {
            return Ok(PerronResult {
                lambda,
                left_vector: nu,
                iterations: iteration,
                residual,
                irreducible,
            });
        }
        for (v, wi) in nu.iter_mut().zip(&w) {
            *v = wi / lambda;
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        residual,
    })
}

/// Power iteration on `S^(2^squarings)` to get a start vector, then
/// [`perron_left_from`] on `S` itself, so the returned residual refers to
/// `S`. Useful when the gap below the Perron root is tiny; costs
/// `squarings` dense matrix products.
pub fn perron_left_warm<L>(
    matrix: &SubstochasticMatrix<L>,
    squarings: u32,
    opts: PerronOptions,
) -> Result<PerronResult> {
    let d = matrix.dim();
    let mut power = matrix.entries().to_vec();
    let mut scratch = vec![0.0; d * d];
    for _ in 0..squarings {
        scratch.fill(0.0);
        for i in 0..d {
            for k in 0..d {
                let a = power[i * d + k];
                if a == 0.0 {
                    continue;
                }
                let (row_out, row_k) = (&mut scratch[i * d..(i + 1) * d], &power[k * d..(k + 1) * d]);
                for (o, b) in row_out.iter_mut().zip(row_k) {
                    *o += a * b;
                }
            }
        }
        // Rescale so entries stay representable; only the direction matters.
        let max = scratch.iter().fold(0.0f64, |m, x| m.max(*x));
        if !(max > 0.0) {
            return Err(Error::NonConvergence {
                iterations: 0,
                residual: f64::NAN,
            });
        }
        for x in &mut scratch {
            *x /= max;
        }
        std::mem::swap(&mut power, &mut scratch);
    }
    let mut nu = vec![1.0 / d as f64; d];
    let mut w = vec![0.0; d];
    for _ in 0..200 {
        w.fill(0.0);
        for (i, &x) in nu.iter().enumerate() {
            for (o, b) in w.iter_mut().zip(&power[i * d..(i + 1) * d]) {
                *o += x * b;
            }
        }
        let mass: f64 = w.iter().sum();
        if !(mass > 0.0) {
            break;
        }
        let change = w
            .iter()
            .zip(&nu)
            .map(|(a, b)| (a / mass - b).abs())
            .fold(0.0, f64::max);
        for (v, a) in nu.iter_mut().zip(&w) {
            *v = a / mass;
        }
        if change < 1e-16 {
            break;
        }
    }
    perron_left_from(matrix, &nu, opts)
}

/// Strong connectivity of the positive pattern.
pub fn is_irreducible<L>(matrix: &SubstochasticMatrix<L>) -> bool {
    strongly_connected(&matrix.sparse_rows(), matrix.dim())
}

fn strongly_connected(sparse: &SparseRows, dim: usize) -> bool {
    let mut reverse = vec![Vec::new(); dim];
    for i in 0..dim {
        for &j in sparse.successors(i) {
            reverse[j].push(i);
        }
    }
    let reaches_all = |next: &dyn Fn(usize) -> Vec<usize>| {
        let mut seen = vec![false; dim];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for j in next(i) {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count == dim
    };
    reaches_all(&|i| sparse.successors(i).to_vec()) && reaches_all(&|i| reverse[i].clone())
}
