use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::induced::{InducedKernel, InducedState, TransitionProbs};
use crate::io::fmt_f64;

/// Default cap on the number of transient states handed to dense routines.
pub const DEFAULT_DIM_CAP: usize = 10_000;

/// Slack allowed on row sums above 1.
pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// Dense nonnegative matrix with row sums at most 1, indexed by `states`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstochasticMatrix<L = InducedState> {
    states: Vec<L>,
    entries: Vec<f64>,
}

impl<L> SubstochasticMatrix<L> {
    /// `entries` is row-major with `states.len()^2` elements.
    pub fn new(states: Vec<L>, entries: Vec<f64>) -> Result<Self> {
        let dim = states.len();
        if dim == 0 {
            return Err(Error::invalid("matrix needs at least one state"));
        }
        if entries.len() != dim * dim {
            return Err(Error::invalid(format!(
                "expected {} entries for {dim} states, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if let Some(x) = entries.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
            return Err(Error::invalid(format!("entry {x} is not a nonnegative number")));
        }
        for (i, row) in entries.chunks_exact(dim).enumerate() {
            let sum: f64 = row.iter().sum();
            if sum > 1.0 + ROW_SUM_TOLERANCE {
                return Err(Error::invalid(format!("row {i} sums to {sum} > 1")));
            }
        }
        Ok(SubstochasticMatrix { states, entries })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[L] {
        &self.states
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.entries[i * d..(i + 1) * d]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries
            .chunks_exact(self.dim())
            .map(|r| r.iter().sum())
            .collect()
    }

    /// Nonzero pattern in compressed row form.
    pub(crate) fn sparse_rows(&self) -> SparseRows {
        let d = self.dim();
        let mut offsets = Vec::with_capacity(d + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        offsets.push(0);
        for row in self.entries.chunks_exact(d) {
            for (j, &x) in row.iter().enumerate() {
                if x != 0.0 {
                    cols.push(j);
                    vals.push(x);
                }
            }
            offsets.push(cols.len());
        }
        SparseRows {
            offsets,
            cols,
            vals,
        }
    }

    /// Exact survival curve `P_i(tau > t) = (e_i S^t 1)` for `t = 0..=horizon`.
    pub fn survival_curve(&self, initial: usize, horizon: u64) -> Vec<f64> {
        let sparse = self.sparse_rows();
        let mut dist = vec![0.0; self.dim()];
        dist[initial] = 1.0;
        let mut next = vec![0.0; self.dim()];
        let mut curve = Vec::with_capacity(horizon as usize + 1);
        curve.push(1.0);
        for _ in 0..horizon {
            sparse.left_mul(&dist, &mut next);
            std::mem::swap(&mut dist, &mut next);
            curve.push(dist.iter().sum());
        }
        curve
    }
}

/// Row-compressed copy of a matrix's nonzeros, used by iterative routines.
#[derive(Debug, Clone)]
pub(crate) struct SparseRows {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseRows {
    /// `out = x S`.
    pub(crate) fn left_mul(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let span = self.offsets[i]..self.offsets[i + 1];
            for (&j, &s) in self.cols[span.clone()].iter().zip(&self.vals[span]) {
                out[j] += xi * s;
            }
        }
    }

    pub(crate) fn successors(&self, i: usize) -> &[usize] {
        &self.cols[self.offsets[i]..self.offsets[i + 1]]
    }
}

/// Restriction of the induced kernel to its transient states, in the
/// kernel's canonical order. Mass sent into consensus is dropped.
pub fn build_s(m: usize, n: usize) -> Result<SubstochasticMatrix<InducedState>> {
    build_s_capped(m, n, DEFAULT_DIM_CAP)
}

pub fn build_s_capped(m: usize, n: usize, cap: usize) -> Result<SubstochasticMatrix<InducedState>> {
    let dim = (m + 1)
        .checked_mul(n + 1)
        .and_then(|d| d.checked_sub(4))
        .unwrap_or(usize::MAX);
    if dim > cap {
        return Err(Error::SizeCap {
            what: "transient states of the induced chain",
            requested: dim as u128,
            cap: cap as u128,
        });
    }
    let kernel = InducedKernel::new(m, n)?;
    let states = kernel.transient_states().to_vec();
    debug_assert_eq!(states.len(), dim);
    let mut entries = vec![0.0; dim * dim];
    for (i, &s) in states.iter().enumerate() {
        let probs = kernel.transition_probs(s);
        for (target, p) in TransitionProbs::targets(s).iter().zip(probs.as_array()) {
            if p == 0.0 {
                continue;
            }
            let target = target.expect("positive move stays on the grid");
            if let Some(j) = kernel.transient_index(target) {
                entries[i * dim + j] += p;
            } else {
                debug_assert!(kernel.is_absorbing(target), "mass into {target:?}");
            }
        }
    }
    SubstochasticMatrix::new(states, entries)
}

/// QSD table: `k,l,nu` over the given states.
pub fn write_qsd_csv<W: Write>(mut w: W, states: &[InducedState], nu: &[f64]) -> io::Result<()> {
    writeln!(w, "k,l,nu")?;
    for (s, p) in states.iter().zip(nu) {
        writeln!(w, "{},{},{}", s.k, s.l, fmt_f64(*p))?;
    }
    Ok(())
}
