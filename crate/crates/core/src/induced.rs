//! The lumped chain on `(k, l)` pairs for the Invasion model on `K_{m,n}`.
//!
//! `k` counts "yes" opinions in the small partition and `l` in the large one.
//! Transition probabilities are formed in exact rational arithmetic and then
//! tabulated as floats for sampling.

use std::io::{self, Write};

use num_rational::Ratio;
use rand::Rng;

use crate::dynamics::{rho_invasion, OpinionConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::fmt_f64;

/// Default cap on `2^(m+n)` for the exhaustive lumpability check.
pub const LUMPABILITY_STATE_CAP: u64 = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InducedState {
    pub k: usize,
    pub l: usize,
}

impl InducedState {
    pub const fn new(k: usize, l: usize) -> Self {
        InducedState { k, l }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateClass {
    /// `(0,0)` and `(m,n)`: consensus.
    Absorbing,
    /// `(0,n)` and `(m,0)`: opposite consensus on each side, never entered.
    Inaccessible,
    Transient,
}

/// Probabilities of the five possible moves out of a pair state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moves<T> {
    pub up_k: T,
    pub down_k: T,
    pub up_l: T,
    pub down_l: T,
    pub stay: T,
}

pub type TransitionProbs = Moves<f64>;
pub type ExactTransition = Moves<Ratio<i128>>;

impl<T: Copy> Moves<T> {
    pub fn as_array(&self) -> [T; 5] {
        [self.up_k, self.down_k, self.up_l, self.down_l, self.stay]
    }

    /// Destination of each entry of [`as_array`](Self::as_array), with
    /// `None` where the move leaves the grid (its probability is then zero).
    pub fn targets(s: InducedState) -> [Option<InducedState>; 5] {
        let InducedState { k, l } = s;
        [
            Some(InducedState::new(k + 1, l)),
            k.checked_sub(1).map(|k| InducedState::new(k, l)),
            Some(InducedState::new(k, l + 1)),
            l.checked_sub(1).map(|l| InducedState::new(k, l)),
            Some(s),
        ]
    }
}

impl TransitionProbs {
    pub fn sum(&self) -> f64 {
        self.as_array().iter().sum()
    }
}

/// Checks `2 <= m <= n`, or `m = 1` and `n >= 3`.
pub fn check_partition_sizes(m: usize, n: usize) -> Result<()> {
    let ok = (2..=n).contains(&m) || (m == 1 && n >= 3);
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "partition sizes must satisfy 2 <= m <= n or (m = 1, n >= 3); got m={m}, n={n}"
        )))
    }
}

/// Transition kernel of the induced chain.
#[derive(Debug, Clone)]
pub struct InducedKernel {
    m: usize,
    n: usize,
    // Cumulative thresholds (up_k, +down_k, +up_l, +down_l) per state, row-major.
    cumulative: Vec<[f64; 4]>,
    transient_index: Vec<Option<usize>>,
    transient: Vec<InducedState>,
}

impl InducedKernel {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        check_partition_sizes(m, n)?;
        let mut kernel = InducedKernel {
            m,
            n,
            cumulative: Vec::with_capacity((m + 1) * (n + 1)),
            transient_index: vec![None; (m + 1) * (n + 1)],
            transient: Vec::new(),
        };
        for k in 0..=m {
            for l in 0..=n {
                let s = InducedState::new(k, l);
                let p = kernel.transition_probs(s);
                kernel.cumulative.push([
                    p.up_k,
                    p.up_k + p.down_k,
                    p.up_k + p.down_k + p.up_l,
                    p.up_k + p.down_k + p.up_l + p.down_l,
                ]);
                if kernel.classify(s) == StateClass::Transient {
                    kernel.transient_index[k * (n + 1) + l] = Some(kernel.transient.len());
                    kernel.transient.push(s);
                }
            }
        }
        Ok(kernel)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, s: InducedState) -> bool {
        s.k <= self.m && s.l <= self.n
    }

    pub fn classify(&self, s: InducedState) -> StateClass {
        let (m, n) = (self.m, self.n);
        match (s.k, s.l) {
            (0, 0) => StateClass::Absorbing,
            (k, l) if k == m && l == n => StateClass::Absorbing,
            (0, l) if l == n => StateClass::Inaccessible,
            (k, 0) if k == m => StateClass::Inaccessible,
            _ => StateClass::Transient,
        }
    }

    pub fn is_absorbing(&self, s: InducedState) -> bool {
        self.classify(s) == StateClass::Absorbing
    }

    /// Transient states in row-major order (`k` major, `l` minor). This order
    /// indexes every QSD vector in the crate.
    pub fn transient_states(&self) -> &[InducedState] {
        &self.transient
    }

    pub fn transient_index(&self, s: InducedState) -> Option<usize> {
        if !self.contains(s) {
            return None;
        }
        self.transient_index[s.k * (self.n + 1) + s.l]
    }

    pub fn exact_transition(&self, s: InducedState) -> ExactTransition {
        assert!(self.contains(s), "state {s:?} out of bounds");
        let (m, n) = (self.m as i128, self.n as i128);
        let (k, l) = (s.k as i128, s.l as i128);
        let r = Ratio::new;
        Moves {
            up_k: r(l * (m - k), m * (n + m)),
            down_k: r(k * (n - l), m * (n + m)),
            up_l: r(k * (n - l), n * (n + m)),
            down_l: r(l * (m - k), n * (n + m)),
            stay: r(k * l + (m - k) * (n - l), n * m),
        }
    }

    pub fn transition_probs(&self, s: InducedState) -> TransitionProbs {
        let e = self.exact_transition(s);
        let f = |x: Ratio<i128>| *x.numer() as f64 / *x.denom() as f64;
        Moves {
            up_k: f(e.up_k),
            down_k: f(e.down_k),
            up_l: f(e.up_l),
            down_l: f(e.down_l),
            stay: f(e.stay),
        }
    }

    /// One step of the induced chain.
    pub fn step<R: Rng + ?Sized>(&self, s: InducedState, rng: &mut R) -> InducedState {
        let c = &self.cumulative[s.k * (self.n + 1) + s.l];
        let u: f64 = rng.random();
        if u < c[0] {
            InducedState::new(s.k + 1, s.l)
        } else if u < c[1] {
            InducedState::new(s.k - 1, s.l)
        } else if u < c[2] {
            InducedState::new(s.k, s.l + 1)
        } else if u < c[3] {
            InducedState::new(s.k, s.l - 1)
        } else {
            s
        }
    }

    /// Kernel dump: `k,l,up_k,down_k,up_l,down_l,stay`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "k,l,up_k,down_k,up_l,down_l,stay")?;
        for k in 0..=self.m {
            for l in 0..=self.n {
                let p = self.transition_probs(InducedState::new(k, l));
                write!(w, "{k},{l}")?;
                for x in p.as_array() {
                    write!(w, ",{}", fmt_f64(x))?;
                }
                writeln!(w)?;
            }
        }
        Ok(())
    }
}

/// `(k, l)` counts of a configuration on a tagged `K_{m,n}`.
pub fn project(graph: &Graph, config: &OpinionConfig) -> Result<InducedState> {
    let part = graph
        .bipartition()
        .ok_or_else(|| Error::invalid("projection needs a bipartite-tagged graph"))?;
    if config.len() != graph.vertex_count() {
        return Err(Error::invalid("configuration does not match graph"));
    }
    let ops = config.opinions();
    let count = |r: std::ops::Range<usize>| ops[r].iter().filter(|&&o| o == 1).count();
    Ok(InducedState::new(
        count(part.small_range()),
        count(part.large_range()),
    ))
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc.checked_mul(n as u128 - k as u128 + i)? / i;
    }
    Some(acc)
}

/// Number of full configurations lumped into `s`: `C(m,k) * C(n,l)`.
pub fn binomial_weight(m: usize, n: usize, s: InducedState) -> Result<u128> {
    if s.k > m || s.l > n {
        return Err(Error::invalid(format!("state {s:?} outside [0,{m}]x[0,{n}]")));
    }
    let overflow = || Error::Overflow(format!("C({m},{}) * C({n},{})", s.k, s.l));
    binomial(m, s.k)
        .zip(binomial(n, s.l))
        .and_then(|(a, b)| a.checked_mul(b))
        .ok_or_else(overflow)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LumpabilityReport {
    pub full_states: u64,
    pub max_defect: f64,
}

impl LumpabilityReport {
    pub fn is_lumpable(&self, tolerance: f64) -> bool {
        self.max_defect <= tolerance
    }
}

/// Exhaustive check that the full chain on `{0,1}^(m+n)` lumps onto the
/// induced kernel.
pub fn lumpability_check(m: usize, n: usize) -> Result<LumpabilityReport> {
    let kernel = InducedKernel::new(m, n)?;
    lumpability_check_against(m, n, LUMPABILITY_STATE_CAP, |s| kernel.transition_probs(s))
}

/// Compares the block transition probabilities of the full chain against an
/// arbitrary pair kernel. For every configuration, the mass sent into each
/// `(k', l')` block must equal the kernel's probability out of its projection.
pub fn lumpability_check_against(
    m: usize,
    n: usize,
    state_cap: u64,
    kernel: impl Fn(InducedState) -> TransitionProbs,
) -> Result<LumpabilityReport> {
    let bits = m + n;
    let full_states = 1u64
        .checked_shl(bits as u32)
        .filter(|&s| bits < 64 && s <= state_cap)
        .ok_or(Error::SizeCap {
            what: "lumpability check (2^(m+n) configurations)",
            requested: 1u128 << bits.min(127),
            cap: u128::from(state_cap),
        })?;
    let graph = Graph::complete_bipartite(m, n)?;
    let rho = rho_invasion(&graph)?;
    let width = n + 1;
    let mut block = vec![0.0f64; (m + 1) * width];
    let mut expected = vec![0.0f64; (m + 1) * width];
    let mut max_defect = 0.0f64;

    for mask in 0..full_states {
        let eta = OpinionConfig::from_mask(&graph, mask)?;
        let from = project(&graph, &eta)?;
        block.fill(0.0);
        for (&(v, u), &w) in rho.edges().iter().zip(rho.weights()) {
            let (mut k, mut l) = (from.k, from.l);
            let (new, old) = (eta.get(v), eta.get(u));
            if new != old {
                let counter = if u < m { &mut k } else { &mut l };
                if new == 1 {
                    *counter += 1;
                } else {
                    *counter -= 1;
                }
            }
            block[k * width + l] += w;
        }
        expected.fill(0.0);
        let probs = kernel(from);
        for (target, p) in TransitionProbs::targets(from).iter().zip(probs.as_array()) {
            match target {
                Some(t) if t.k <= m && t.l <= n => expected[t.k * width + t.l] += p,
                // Off-grid move: its probability must be zero, and any mass
                // there counts as a defect.
                _ => max_defect = max_defect.max(p.abs()),
            }
        }
        for (b, e) in block.iter().zip(&expected) {
            max_defect = max_defect.max((b - e).abs());
        }
    }
    Ok(LumpabilityReport {
        full_states,
        max_defect,
    })
}
