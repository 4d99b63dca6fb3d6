//! Monte-Carlo estimates of the QSD and of the survival rate.

use std::io::{self, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::SurvivalTail;
use crate::error::{Error, Result};
use crate::induced::{InducedKernel, InducedState};
use crate::rng::replica_rng;
use crate::spectral::write_qsd_csv;

/// Default trimming fraction for [`regress_lambda`].
pub const DEFAULT_TRIM: f64 = 0.001;

/// Occupation counts over the transient states of an induced kernel, in the
/// kernel's canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    states: Vec<InducedState>,
    counts: Vec<u64>,
    total: u64,
}

impl EmpiricalMeasure {
    pub fn new(kernel: &InducedKernel) -> Self {
        let states = kernel.transient_states().to_vec();
        let counts = vec![0; states.len()];
        EmpiricalMeasure {
            states,
            counts,
            total: 0,
        }
    }

    pub fn states(&self) -> &[InducedState] {
        &self.states
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, s: InducedState) -> u64 {
        self.states
            .iter()
            .position(|&t| t == s)
            .map_or(0, |i| self.counts[i])
    }

    fn add(&mut self, index: usize, c: u64) {
        self.counts[index] += c;
        self.total += c;
    }

    /// Normalized counts. All zero if the measure is empty.
    pub fn probabilities(&self) -> Vec<f64> {
        if self.total == 0 {
            return vec![0.0; self.counts.len()];
        }
        let t = self.total as f64;
        self.counts.iter().map(|&c| c as f64 / t).collect()
    }

    /// Total-variation distance to a probability vector over the same states.
    pub fn tv_distance(&self, other: &[f64]) -> Result<f64> {
        if other.len() != self.counts.len() {
            return Err(Error::invalid("tv_distance: vectors differ in length"));
        }
        Ok(tv_distance(&self.probabilities(), other))
    }

    pub fn merge(mut self, other: &EmpiricalMeasure) -> Self {
        assert_eq!(self.states, other.states);
        for (i, &c) in other.counts.iter().enumerate() {
            self.add(i, c);
        }
        self
    }

    /// Same schema as the exact QSD table.
    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        write_qsd_csv(w, &self.states, &self.probabilities())
    }
}

/// `(1/2) sum |p - q|`.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Cumulative counts supporting point updates and sampling proportional to
/// the counts.
#[derive(Debug, Clone)]
struct Fenwick {
    tree: Vec<u64>,
    top: usize,
}

impl Fenwick {
    fn new(len: usize) -> Self {
        Fenwick {
            tree: vec![0; len + 1],
            top: len.next_power_of_two(),
        }
    }

    fn add(&mut self, index: usize, c: u64) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] += c;
            i += i & i.wrapping_neg();
        }
    }

    /// Smallest index whose prefix sum exceeds `target`.
    fn find(&self, mut target: u64) -> usize {
        let mut pos = 0;
        let mut step = self.top;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}

/// Default burn-in for [`estimate_qsd_restart`]: 1% of the step budget.
pub fn default_burn_in(total_steps: u64) -> u64 {
    total_steps / 100
}

/// Single-chain restart estimator. Whenever the chain would enter consensus
/// it is instead moved to a state drawn from its own occupation measure so
/// far (counting time 0). Only steps after `burn_in` enter the returned
/// estimate.
pub fn estimate_qsd_restart<R: Rng + ?Sized>(
    kernel: &InducedKernel,
    initial: InducedState,
    total_steps: u64,
    burn_in: u64,
    rng: &mut R,
) -> Result<EmpiricalMeasure> {
    let Some(start) = kernel.transient_index(initial) else {
        return Err(Error::invalid(format!("initial state {initial:?} is not transient")));
    };
    if total_steps <= burn_in {
        return Err(Error::invalid("total_steps must exceed burn_in"));
    }
    let states = kernel.transient_states();
    let mut occupation = Fenwick::new(states.len());
    let mut visited = 0u64;
    let mut estimate = EmpiricalMeasure::new(kernel);

    occupation.add(start, 1);
    visited += 1;
    let mut current = initial;
    for t in 1..=total_steps {
        let next = kernel.step(current, rng);
        let index = match kernel.transient_index(next) {
            Some(i) => i,
            None => {
                if visited == 0 {
                    return Err(Error::invalid("empty occupation measure at restart"));
                }
                occupation.find(rng.random_range(0..visited))
            }
        };
        current = states[index];
        occupation.add(index, 1);
        visited += 1;
        if t > burn_in {
            estimate.add(index, 1);
        }
    }
    Ok(estimate)
}

/// Conditioned-on-survival estimator: the law at `t_star` of the replicas
/// still alive. Replica `i` uses the generator seeded with `seed + i`, so the
/// result does not depend on the thread count.
pub fn estimate_qsd_conditional(
    kernel: &InducedKernel,
    initial: InducedState,
    t_star: u64,
    replicas: u64,
    seed: u64,
) -> Result<EmpiricalMeasure> {
    let Some(start) = kernel.transient_index(initial) else {
        return Err(Error::invalid(format!("initial state {initial:?} is not transient")));
    };
    if replicas == 0 {
        return Err(Error::invalid("estimate_qsd_conditional needs at least one replica"));
    }
    let empty = EmpiricalMeasure::new(kernel);
    if t_star == 0 {
        let mut point = empty;
        point.add(start, replicas);
        return Ok(point);
    }
    let survivors = (0..replicas)
        .into_par_iter()
        .fold(
            || empty.clone(),
            |mut acc, i| {
                let mut rng = replica_rng(seed, i);
                let mut s = initial;
                for _ in 0..t_star {
                    s = kernel.step(s, &mut rng);
                    if kernel.is_absorbing(s) {
                        return acc;
                    }
                }
                acc.add(kernel.transient_index(s).expect("alive state is transient"), 1);
                acc
            },
        )
        .reduce(|| empty.clone(), |a, b| a.merge(&b));
    if survivors.total == 0 {
        return Err(Error::NoSurvivors { t_star, replicas });
    }
    Ok(survivors)
}

/// Smallest `t` with `curve[t] <= level`, if any.
pub fn first_time_below(curve: &[f64], level: f64) -> Option<u64> {
    curve.iter().position(|&p| p <= level).map(|t| t as u64)
}

/// Survival tail of the induced chain, censored at `horizon`.
pub fn induced_survival_tail(
    kernel: &InducedKernel,
    initial: InducedState,
    horizon: u64,
    replicas: u64,
    seed: u64,
) -> Result<SurvivalTail> {
    if kernel.transient_index(initial).is_none() {
        return Err(Error::invalid(format!("initial state {initial:?} is not transient")));
    }
    if replicas == 0 {
        return Err(Error::invalid("induced_survival_tail needs at least one replica"));
    }
    let times: Vec<Option<u64>> = (0..replicas)
        .into_par_iter()
        .map(|i| {
            let mut rng = replica_rng(seed, i);
            let mut s = initial;
            for t in 1..=horizon {
                s = kernel.step(s, &mut rng);
                if kernel.is_absorbing(s) {
                    return Some(t);
                }
            }
            None
        })
        .collect();
    Ok(SurvivalTail::from_times(times, horizon))
}

/// `t,survivors,p_hat` rows.
pub fn write_tail_csv<W: Write>(mut w: W, tail: &SurvivalTail) -> io::Result<()> {
    writeln!(w, "t,survivors,p_hat")?;
    for (t, (s, p)) in tail.survivors.iter().zip(tail.p_hat()).enumerate() {
        writeln!(w, "{t},{s},{}", crate::io::fmt_f64(p))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionReport {
    pub slope: f64,
    pub intercept: f64,
    pub lambda_hat: f64,
    /// First and last `t` used in the fit.
    pub t_range: (u64, u64),
    pub points_kept: usize,
}

/// Fits `ln tail(t) = intercept + slope * t` by ordinary least squares over
/// the times where the tail, relative to `tail[0]`, lies strictly inside
/// `(trim, 1 - trim)`: the central band of the absorption-time sample.
pub fn regress_lambda(tail: &[f64], trim: f64) -> Result<RegressionReport> {
    if !(0.0..0.5).contains(&trim) {
        return Err(Error::invalid(format!("trim fraction {trim} outside [0, 0.5)")));
    }
    let Some(&scale) = tail.first() else {
        return Err(Error::TooFewPoints { kept: 0 });
    };
    if !(scale > 0.0) {
        return Err(Error::invalid("tail must start positive"));
    }
    let (lo, hi) = (trim * scale, (1.0 - trim) * scale);
    let kept: Vec<(f64, f64)> = tail
        .iter()
        .enumerate()
        .filter(|&(_, &p)| p > lo && p < hi && p > 0.0)
        .map(|(t, &p)| (t as f64, p.ln()))
        .collect();
    if kept.len() < 2 {
        return Err(Error::TooFewPoints { kept: kept.len() });
    }
    let n = kept.len() as f64;
    let mean_t = kept.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = kept.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = kept.iter().map(|p| (p.0 - mean_t).powi(2)).sum();
    let sxy: f64 = kept.iter().map(|p| (p.0 - mean_t) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    Ok(RegressionReport {
        slope,
        intercept: mean_y - slope * mean_t,
        lambda_hat: slope.exp(),
        t_range: (kept[0].0 as u64, kept[kept.len() - 1].0 as u64),
        points_kept: kept.len(),
    })
}
