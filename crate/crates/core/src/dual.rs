//! The reverse flow of opinions and the coalescing chains it defines.
//!
//! Tracing who-copied-whom backwards in time turns the forward dynamics into
//! a system of coalescing Markov chains, one started at every vertex. On
//! `K_{m,n}` the law of two uncoalesced chains lumps onto three states
//! (both in the large partition, both in the small one, split), and the
//! spectral radius of that 3x3 substochastic matrix is the survival rate of
//! the forward chain.

use num_rational::Ratio;
use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{EdgeDistribution, SurvivalTail};
use crate::error::{Error, Result};
use crate::induced::check_partition_sizes;
use crate::rng::replica_rng;
use crate::spectral::{lu_solve, perron_left, PerronOptions, SubstochasticMatrix};

/// Positions `X_t(u)` of the chain started at every vertex `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalescingSystem {
    positions: Vec<usize>,
    time: u64,
}

impl CoalescingSystem {
    /// `X_0(u) = u`.
    pub fn new(vertex_count: usize) -> Self {
        CoalescingSystem {
            positions: (0..vertex_count).collect(),
            time: 0,
        }
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn is_coalesced(&self) -> bool {
        self.positions.windows(2).all(|w| w[0] == w[1])
    }

    /// Number of distinct occupied vertices.
    pub fn cluster_count(&self) -> usize {
        let mut occupied = self.positions.clone();
        occupied.sort_unstable();
        occupied.dedup();
        occupied.len()
    }
}

/// Samples the reverse flow: the receiving vertex `U ~ rho_2`, then the
/// sender `V ~ rho(. | U)`.
#[derive(Debug, Clone)]
pub struct ReverseFlow {
    receiver: WeightedAliasIndex<f64>,
    // senders[u] = (candidate senders, alias table over them)
    senders: Vec<(Vec<usize>, WeightedAliasIndex<f64>)>,
}

impl ReverseFlow {
    pub fn new(rho: &EdgeDistribution) -> Result<Self> {
        let marginal = rho.receiver_marginal();
        let alias_err = |e| Error::invalid(format!("alias table: {e}"));
        let receiver = WeightedAliasIndex::new(marginal.clone()).map_err(alias_err)?;
        let mut by_receiver: Vec<(Vec<usize>, Vec<f64>)> =
            vec![(Vec::new(), Vec::new()); rho.vertex_count()];
        for (&(v, u), &w) in rho.edges().iter().zip(rho.weights()) {
            by_receiver[u].0.push(v);
            by_receiver[u].1.push(w / marginal[u]);
        }
        let senders = by_receiver
            .into_iter()
            .map(|(vs, ws)| Ok((vs, WeightedAliasIndex::new(ws).map_err(alias_err)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReverseFlow { receiver, senders })
    }

    /// Draws `(U, V)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        let u = self.receiver.sample(rng);
        let (vs, alias) = &self.senders[u];
        (u, vs[alias.sample(rng)])
    }
}

/// One step of the reverse flow: every chain sitting at `U` jumps to `V`.
pub fn reverse_step<R: Rng + ?Sized>(sys: &mut CoalescingSystem, flow: &ReverseFlow, rng: &mut R) {
    let (u, v) = flow.sample(rng);
    for x in &mut sys.positions {
        if *x == u {
            *x = v;
        }
    }
    sys.time += 1;
}

/// Follows the recorded forward edges backwards from vertex `u` at time
/// `horizon` and returns the vertex whose time-0 opinion `u` holds at
/// `horizon`.
pub fn duality_trace(edge_log: &[(usize, usize)], u: usize, horizon: usize) -> Result<usize> {
    if edge_log.len() < horizon {
        return Err(Error::invalid(format!(
            "edge log has {} steps, trace needs {horizon}",
            edge_log.len()
        )));
    }
    Ok(edge_log[..horizon]
        .iter()
        .rev()
        .fold(u, |pos, &(v, w)| if pos == w { v } else { pos }))
}

/// Relative placement of two uncoalesced reverse chains on `K_{m,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairChainState {
    BothLarge,
    BothSmall,
    Split,
    Coalesced,
}

impl PairChainState {
    /// Row of the pair matrix, `None` for the absorbing state.
    pub fn index(self) -> Option<usize> {
        match self {
            PairChainState::BothLarge => Some(0),
            PairChainState::BothSmall => Some(1),
            PairChainState::Split => Some(2),
            PairChainState::Coalesced => None,
        }
    }

    fn from_index(i: usize) -> Self {
        [
            PairChainState::BothLarge,
            PairChainState::BothSmall,
            PairChainState::Split,
        ][i]
    }
}

/// The pair-chain matrix `p` (rows: both-large, both-small, split) and its
/// rescaled generator `pbar = (p - I) (m + n) n m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMatrix {
    pub m: usize,
    pub n: usize,
    pub p: [[f64; 3]; 3],
    pub pbar: [[f64; 3]; 3],
}

pub type ExactPairMatrix = [[Ratio<i128>; 3]; 3];

/// Exact entries of `p`.
pub fn pair_matrix_exact(m: usize, n: usize) -> Result<ExactPairMatrix> {
    check_partition_sizes(m, n)?;
    let (mi, ni) = (m as i128, n as i128);
    let r = Ratio::new;
    let one = r(1, 1);
    let zero = r(0, 1);
    let to_split_from_large = r(2 * mi, (mi + ni) * ni);
    let to_split_from_small = r(2 * ni, (mi + ni) * mi);
    Ok([
        [one - to_split_from_large, zero, to_split_from_large],
        [zero, one - to_split_from_small, to_split_from_small],
        [
            r(ni - 1, (mi + ni) * mi),
            r(mi - 1, (mi + ni) * ni),
            one - r(mi * mi + ni * ni, (mi + ni) * mi * ni),
        ],
    ])
}

pub fn pair_matrix(m: usize, n: usize) -> Result<PairMatrix> {
    let exact = pair_matrix_exact(m, n)?;
    let scale = ((m + n) * n * m) as f64;
    let mut p = [[0.0; 3]; 3];
    let mut pbar = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let x = exact[i][j];
            p[i][j] = *x.numer() as f64 / *x.denom() as f64;
            let identity = Ratio::from_integer(i128::from(i == j));
            let g = (x - identity) * Ratio::from_integer(((m + n) * n * m) as i128);
            pbar[i][j] = *g.numer() as f64 / *g.denom() as f64;
            debug_assert!((pbar[i][j] - (p[i][j] - f64::from(u8::from(i == j))) * scale).abs() < 1e-6 * scale);
        }
    }
    Ok(PairMatrix { m, n, p, pbar })
}

impl PairMatrix {
    /// The matrix handed to the spectral solver. With `m = 1` the
    /// both-small state cannot occur and is removed.
    pub fn reduced(&self) -> SubstochasticMatrix<PairChainState> {
        let keep: Vec<usize> = if self.m == 1 { vec![0, 2] } else { vec![0, 1, 2] };
        let entries = keep
            .iter()
            .flat_map(|&i| keep.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.p[i][j])
            .collect();
        let states = keep.iter().map(|&i| PairChainState::from_index(i)).collect();
        SubstochasticMatrix::new(states, entries).expect("pair matrix is substochastic")
    }

    /// Steps of the discrete pair chain until coalescence.
    pub fn sample_sigma<R: Rng + ?Sized>(&self, start: PairChainState, rng: &mut R) -> Result<u64> {
        if self.m == 1 && start == PairChainState::BothSmall {
            return Err(Error::invalid("K_{1,n} has only one small vertex"));
        }
        let Some(mut state) = start.index() else {
            return Ok(0);
        };
        let mut t = 0u64;
        loop {
            t += 1;
            let row = &self.p[state];
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut next = None;
            for (j, &pj) in row.iter().enumerate() {
                acc += pj;
                if u < acc {
                    next = Some(j);
                    break;
                }
            }
            match next {
                Some(j) => state = j,
                None => return Ok(t),
            }
        }
    }
}

/// Spectral radius of the pair matrix, by power iteration.
pub fn lambda_cmc_numeric(m: usize, n: usize) -> Result<f64> {
    let matrix = pair_matrix(m, n)?.reduced();
    Ok(perron_left(&matrix, PerronOptions::default())?.lambda)
}

/// Closed form for `m = 1`, evaluated as `1 - 4 / (n (a + sqrt(a^2 - 8(n+1))))`
/// with `a = 3 + n^2`, which avoids the cancellation in `a - sqrt(...)`.
pub fn lambda_closed_m1(n: usize) -> Result<f64> {
    check_partition_sizes(1, n)?;
    let nf = n as f64;
    let a = 3.0 + nf * nf;
    let disc = a * a - 8.0 * (nf + 1.0);
    Ok(1.0 - 4.0 / (nf * (a + disc.sqrt())))
}

/// Leading-order survival rate `1 - 2m / ((m + n) n^2)`.
pub fn lambda_asymptotic(m: usize, n: usize) -> f64 {
    let (mf, nf) = (m as f64, n as f64);
    1.0 - 2.0 * mf / ((mf + nf) * nf * nf)
}

/// Survival rate of the Voter model on `K_{m,n}`:
/// `1 - 2/(m+n) (1 - sqrt(1 - 1/(2m) - 1/(2n)))`.
pub fn lambda_voter(m: usize, n: usize) -> f64 {
    let (mf, nf) = (m as f64, n as f64);
    let e = 0.5 / mf + 0.5 / nf;
    1.0 - 2.0 / (mf + nf) * (e / (1.0 + (1.0 - e).sqrt()))
}

/// Expected absorption times `(f1, f2, f3)` of the continuous-time chain
/// generated by `pbar`, from both-large, both-small and split.
pub fn expected_absorption_times(m: usize, n: usize) -> Result<(f64, f64, f64)> {
    check_partition_sizes(m, n)?;
    if m < 2 {
        return Err(Error::invalid("expected absorption times need m >= 2"));
    }
    let (mf, nf) = (m as f64, n as f64);
    let f3 = (1.0 + (nf - 1.0) * nf / (2.0 * mf * mf) + (mf - 1.0) * mf / (2.0 * nf * nf)) / (mf + nf);
    Ok((f3 + 1.0 / (2.0 * mf * mf), f3 + 1.0 / (2.0 * nf * nf), f3))
}

/// `-pbar^{-1} 1` by a direct 3x3 solve.
pub fn expected_absorption_times_solve(m: usize, n: usize) -> Result<[f64; 3]> {
    let pm = pair_matrix(m, n)?;
    let a: Vec<f64> = pm.pbar.iter().flatten().map(|x| -x).collect();
    let x = lu_solve(&a, 3, &[1.0; 3])?;
    Ok([x[0], x[1], x[2]])
}

pub fn sample_sigma<R: Rng + ?Sized>(m: usize, n: usize, start: PairChainState, rng: &mut R) -> Result<u64> {
    pair_matrix(m, n)?.sample_sigma(start, rng)
}

/// Tail of the pair coalescence time over `replicas` runs (replica `i` seeded
/// with `seed + i`), censored at `horizon`.
pub fn sigma_tail(
    m: usize,
    n: usize,
    start: PairChainState,
    replicas: u64,
    horizon: u64,
    seed: u64,
) -> Result<SurvivalTail> {
    if replicas == 0 {
        return Err(Error::invalid("sigma_tail needs at least one replica"));
    }
    let pm = pair_matrix(m, n)?;
    let times = (0..replicas)
        .into_par_iter()
        .map(|i| pm.sample_sigma(start, &mut replica_rng(seed, i)).map(Some))
        .collect::<Result<Vec<_>>>()?;
    Ok(SurvivalTail::from_times(times, horizon))
}

/// Survival-rate summary for one `(m, n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaReport {
    pub m: usize,
    pub n: usize,
    pub lambda_numeric: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_closed_m1: Option<f64>,
    pub lambda_asymptotic: f64,
    pub one_minus_lambda: f64,
    pub f1: Option<f64>,
    pub f2: Option<f64>,
    pub f3: Option<f64>,
}

pub fn lambda_report(m: usize, n: usize) -> Result<LambdaReport> {
    let lambda_numeric = lambda_cmc_numeric(m, n)?;
    let lambda_closed_m1 = if m == 1 { Some(lambda_closed_m1(n)?) } else { None };
    let times = if m >= 2 { Some(expected_absorption_times(m, n)?) } else { None };
    Ok(LambdaReport {
        m,
        n,
        lambda_numeric,
        lambda_closed_m1,
        lambda_asymptotic: lambda_asymptotic(m, n),
        one_minus_lambda: 1.0 - lambda_numeric,
        f1: times.map(|t| t.0),
        f2: times.map(|t| t.1),
        f3: times.map(|t| t.2),
    })
}
