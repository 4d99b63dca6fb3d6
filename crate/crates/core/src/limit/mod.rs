//! The large-`n` limit of the QSD on `K_{m,n}` and numerical checks of the
//! identities behind it.
//!
//! In the limit the proportion `x = l/n` of "yes" in the large partition is
//! uniform on `[0, 1]`, and given `x` the count `k` in the small partition is
//! `Bin(m, x)`. Equivalently, given `k`, `x` is `Beta(k+1, m-k+1)`.

mod ode;

pub use ode::{solve_ode, OdeSolution, ODE_QUADRATURE_INTERVALS};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::induced::{check_partition_sizes, InducedKernel, InducedState};
use crate::spectral::{build_s, perron_left, PerronOptions};

/// Intervals of the composite Simpson rule used by [`stein_check`].
pub const STEIN_QUADRATURE_INTERVALS: usize = 10_000;

fn binomial(m: usize, k: usize) -> f64 {
    let k = k.min(m - k);
    (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::invalid(format!("x = {x} outside [0, 1]")))
    }
}

/// `C(m,k) x^k (1-x)^(m-k)`.
pub fn limit_joint_density(m: usize, k: usize, x: f64) -> Result<f64> {
    if m == 0 || k > m {
        return Err(Error::invalid(format!("need 0 <= k <= m and m >= 1, got k={k}, m={m}")));
    }
    check_unit(x)?;
    Ok(binomial(m, k) * x.powi(k as i32) * (1.0 - x).powi((m - k) as i32))
}

/// `Bin(m, x)` as a vector over `k = 0..=m`.
pub fn conditional_k_given_x(m: usize, x: f64) -> Result<Vec<f64>> {
    (0..=m).map(|k| limit_joint_density(m, k, x)).collect()
}

/// `Beta(k+1, m-k+1)`, the law of `x` given `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BetaLaw {
    pub m: usize,
    pub k: usize,
}

pub fn conditional_x_given_k(m: usize, k: usize) -> Result<BetaLaw> {
    if m == 0 || k > m {
        return Err(Error::invalid(format!("need 0 <= k <= m and m >= 1, got k={k}, m={m}")));
    }
    Ok(BetaLaw { m, k })
}

impl BetaLaw {
    pub fn params(&self) -> (f64, f64) {
        ((self.k + 1) as f64, (self.m - self.k + 1) as f64)
    }

    /// `(m+1) C(m,k) x^k (1-x)^(m-k)`.
    pub fn pdf(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        (self.m + 1) as f64
            * binomial(self.m, self.k)
            * x.powi(self.k as i32)
            * (1.0 - x).powi((self.m - self.k) as i32)
    }

    /// `I_x(k+1, m-k+1) = P(Bin(m+1, x) >= k+1)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let n = self.m + 1;
        (self.k + 1..=n)
            .map(|j| binomial(n, j) * x.powi(j as i32) * (1.0 - x).powi((n - j) as i32))
            .sum()
    }
}

/// A measure on `{0..m} x {0..n}` stored row-major by `k`, so that
/// `values[k * (n + 1) + l] = nu(k, l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMeasure {
    pub m: usize,
    pub n: usize,
    pub values: Vec<f64>,
}

impl GridMeasure {
    pub fn new(m: usize, n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != (m + 1) * (n + 1) {
            return Err(Error::invalid("grid measure has the wrong length"));
        }
        Ok(GridMeasure { m, n, values })
    }

    /// Extends a vector over `states` by zero to the full grid.
    pub fn from_states(m: usize, n: usize, states: &[InducedState], nu: &[f64]) -> Result<Self> {
        if states.len() != nu.len() {
            return Err(Error::invalid("states and weights differ in length"));
        }
        let mut values = vec![0.0; (m + 1) * (n + 1)];
        for (s, &p) in states.iter().zip(nu) {
            if s.k > m || s.l > n {
                return Err(Error::invalid(format!("state {s:?} outside the grid")));
            }
            values[s.k * (n + 1) + s.l] = p;
        }
        Ok(GridMeasure { m, n, values })
    }

    /// Extends a vector indexed by the transient states of the induced
    /// kernel on `K_{m,n}`.
    pub fn from_transient(m: usize, n: usize, nu: &[f64]) -> Result<Self> {
        let kernel = InducedKernel::new(m, n)?;
        Self::from_states(m, n, kernel.transient_states(), nu)
    }

    /// The limit law sampled on the grid and normalized.
    pub fn discretized_limit(m: usize, n: usize) -> Result<Self> {
        let mut values = Vec::with_capacity((m + 1) * (n + 1));
        for k in 0..=m {
            for l in 0..=n {
                values.push(limit_joint_density(m, k, l as f64 / n as f64)?);
            }
        }
        let total: f64 = values.iter().sum();
        values.iter_mut().for_each(|v| *v /= total);
        Ok(GridMeasure { m, n, values })
    }

    /// `nu(k, l)`, zero off the grid.
    pub fn at(&self, k: i64, l: i64) -> f64 {
        if k < 0 || l < 0 || k > self.m as i64 || l > self.n as i64 {
            return 0.0;
        }
        self.values[k as usize * (self.n + 1) + l as usize]
    }

    /// Law of `l/n` as `(x, weight)` pairs.
    pub fn second_marginal(&self) -> Vec<(f64, f64)> {
        (0..=self.n)
            .map(|l| {
                let w = (0..=self.m).map(|k| self.at(k as i64, l as i64)).sum();
                (l as f64 / self.n as f64, w)
            })
            .collect()
    }
}

/// Kolmogorov-Smirnov distance between a discrete law on sorted atoms and a
/// continuous CDF.
fn ks_discrete_vs(atoms: &[(f64, f64)], cdf: impl Fn(f64) -> f64) -> f64 {
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    let mut below = 0.0;
    let mut d = 0.0f64;
    for &(x, w) in atoms {
        let g = cdf(x);
        d = d.max((below - g).abs());
        below += w / total;
        d = d.max((below - g).abs());
    }
    d
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitDiagnostics {
    pub m: usize,
    pub n: usize,
    /// KS distance of the law of `l/n` to Uniform[0,1].
    pub ks_marginal: f64,
    /// Per `k`: KS distance of the law of `l/n` given `k` to Beta(k+1, m-k+1).
    pub ks_beta: Vec<f64>,
    /// Per decile of `x`: TV distance of the law of `k` to the Binomial
    /// mixture with the measure's own weights on the bin.
    pub tv_binomial: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sl_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taylor_gap: Option<f64>,
}

impl LimitDiagnostics {
    pub fn max_ks_beta(&self) -> f64 {
        self.ks_beta.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_tv_binomial(&self) -> f64 {
        self.tv_binomial.iter().copied().fold(0.0, f64::max)
    }
}

/// Decile of `x`, with `x = 1` in the last bin.
fn decile(x: f64) -> usize {
    ((x * 10.0).floor() as usize).min(9)
}

/// Distances between `grid` and the limit law.
pub fn compare_grid_to_limit(grid: &GridMeasure) -> LimitDiagnostics {
    let (m, n) = (grid.m, grid.n);
    let ks_marginal = ks_discrete_vs(&grid.second_marginal(), |x| x.clamp(0.0, 1.0));

    let ks_beta = (0..=m)
        .map(|k| {
            let atoms: Vec<(f64, f64)> = (0..=n)
                .map(|l| (l as f64 / n as f64, grid.at(k as i64, l as i64)))
                .collect();
            if atoms.iter().all(|a| a.1 == 0.0) {
                return 1.0;
            }
            let beta = BetaLaw { m, k };
            ks_discrete_vs(&atoms, |x| beta.cdf(x))
        })
        .collect();

    let mut observed = vec![vec![0.0; m + 1]; 10];
    let mut mixture = vec![vec![0.0; m + 1]; 10];
    let mut bin_mass = [0.0; 10];
    for l in 0..=n {
        let x = l as f64 / n as f64;
        let b = decile(x);
        let column: Vec<f64> = (0..=m).map(|k| grid.at(k as i64, l as i64)).collect();
        let w: f64 = column.iter().sum();
        bin_mass[b] += w;
        let binom = conditional_k_given_x(m, x).expect("x on the grid");
        for k in 0..=m {
            observed[b][k] += column[k];
            mixture[b][k] += w * binom[k];
        }
    }
    let tv_binomial = (0..10)
        .map(|b| {
            if bin_mass[b] <= 0.0 {
                return 0.0;
            }
            0.5 * (0..=m)
                .map(|k| (observed[b][k] - mixture[b][k]).abs())
                .sum::<f64>()
                / bin_mass[b]
        })
        .collect();

    LimitDiagnostics {
        m,
        n,
        ks_marginal,
        ks_beta,
        tv_binomial,
        sl_residual: None,
        taylor_gap: None,
    }
}

/// Distances between a QSD indexed by the transient states of `K_{m,n}` and
/// the limit law.
pub fn compare_to_limit(nu: &[f64], m: usize, n: usize) -> Result<LimitDiagnostics> {
    Ok(compare_grid_to_limit(&GridMeasure::from_transient(m, n, nu)?))
}

/// The functions `S`, `L`, `D` on the grid `{0..m} x {0..n}` built from a
/// measure `nu` and rate `lambda`, with the residual of
/// `(lambda - 1) nu = S + L + (lambda - 1)/2 1_Delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlDecomposition {
    pub m: usize,
    pub n: usize,
    pub lambda: f64,
    pub s: Vec<f64>,
    pub l: Vec<f64>,
    pub d: Vec<f64>,
    /// `max |(lambda-1) nu - S - L - (lambda-1)/2 1_Delta|` over the grid.
    pub residual: f64,
    /// `max_l |sum_k S(k,l)|`.
    pub s_telescoping: f64,
    /// `max_k |sum_l L(k,l)|`.
    pub l_telescoping: f64,
    /// `max_{k,l} |S(k,l) - (D(k,l) - D(k+1,l))|`.
    pub d_difference: f64,
}

impl SlDecomposition {
    fn idx(&self, k: usize, l: usize) -> usize {
        k * (self.n + 1) + l
    }

    pub fn s_at(&self, k: usize, l: usize) -> f64 {
        self.s[self.idx(k, l)]
    }

    pub fn l_at(&self, k: usize, l: usize) -> f64 {
        self.l[self.idx(k, l)]
    }

    pub fn d_at(&self, k: usize, l: usize) -> f64 {
        self.d[self.idx(k, l)]
    }
}

pub fn sl_decompose(grid: &GridMeasure, lambda: f64) -> Result<SlDecomposition> {
    let (m, n) = (grid.m, grid.n);
    check_partition_sizes(m, n)?;
    let (mf, nf) = (m as f64, n as f64);
    let cs = 1.0 / ((mf + nf) * mf);
    let cl = 1.0 / ((mf + nf) * nf);
    let nu = |k: i64, l: i64| grid.at(k, l);
    let d_fn = |k: i64, l: i64| {
        let (kf, lf) = (k as f64, l as f64);
        cs * (nu(k - 1, l) * lf * (mf - kf + 1.0) - nu(k, l) * (nf - lf) * kf)
    };

    let size = (m + 1) * (n + 1);
    let mut s = Vec::with_capacity(size);
    let mut l_vals = Vec::with_capacity(size);
    let mut d = Vec::with_capacity(size);
    let mut residual = 0.0f64;
    let mut d_difference = 0.0f64;
    for k in 0..=m as i64 {
        for l in 0..=n as i64 {
            let (kf, lf) = (k as f64, l as f64);
            let s_kl = cs * (nu(k - 1, l) * lf * (mf - kf + 1.0) - nu(k, l) * (nf - lf) * kf)
                + cs * (nu(k + 1, l) * (nf - lf) * (kf + 1.0) - nu(k, l) * lf * (mf - kf));
            let l_kl = kf * cl * (nu(k, l - 1) * (nf - lf + 1.0) - nu(k, l) * (nf - lf))
                + (mf - kf) * cl * (nu(k, l + 1) * (lf + 1.0) - nu(k, l) * lf);
            let d_kl = d_fn(k, l);
            let absorbing = (k == 0 && l == 0) || (k == m as i64 && l == n as i64);
            let rhs = s_kl + l_kl + if absorbing { 0.5 * (lambda - 1.0) } else { 0.0 };
            residual = residual.max(((lambda - 1.0) * nu(k, l) - rhs).abs());
            d_difference = d_difference.max((s_kl - (d_kl - d_fn(k + 1, l))).abs());
            s.push(s_kl);
            l_vals.push(l_kl);
            d.push(d_kl);
        }
    }
    let s_telescoping = (0..=n)
        .map(|l| (0..=m).map(|k| s[k * (n + 1) + l]).sum::<f64>().abs())
        .fold(0.0, f64::max);
    let l_telescoping = (0..=m)
        .map(|k| l_vals[k * (n + 1)..(k + 1) * (n + 1)].iter().sum::<f64>().abs())
        .fold(0.0, f64::max);
    Ok(SlDecomposition {
        m,
        n,
        lambda,
        s,
        l: l_vals,
        d,
        residual,
        s_telescoping,
        l_telescoping,
        d_difference,
    })
}

/// Measure against which [`stein_check`] integrates.
#[derive(Debug, Clone, Copy)]
pub enum SteinMeasure<'a> {
    Uniform,
    /// `(x, weight)` atoms, e.g. [`GridMeasure::second_marginal`].
    Discrete(&'a [(f64, f64)]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteinReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// `lhs = int x(1-x) f''(x) + 2 f(x) dmu`, `rhs = f(0) + f(1)`.
pub fn stein_check(f: impl Fn(f64) -> f64, f2: impl Fn(f64) -> f64, measure: SteinMeasure<'_>) -> SteinReport {
    let integrand = |x: f64| x * (1.0 - x) * f2(x) + 2.0 * f(x);
    let lhs = match measure {
        SteinMeasure::Uniform => simpson(&integrand, 0.0, 1.0, STEIN_QUADRATURE_INTERVALS),
        SteinMeasure::Discrete(atoms) => atoms.iter().map(|&(x, w)| w * integrand(x)).sum(),
    };
    let rhs = f(0.0) + f(1.0);
    SteinReport {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    }
}

/// Composite Simpson rule with `intervals` (rounded up to even) subintervals.
pub fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = (intervals.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    /// `gap * n^3`.
    pub scaled_gap: f64,
}

/// Both sides of the second-order expansion of the QSD equation for a test
/// function of `x = l/n` alone:
///
/// `(lambda-1) int f = 1/((m+n)n) int (k(1-x) - (m-k)x) f'
///   + 1/(2(m+n)n^2) int (k(1-x) + (m-k)x) f'' + (lambda-1)/2 (f(0)+f(1))`,
///
/// up to a remainder of order `n^-3`, which is returned as the gap.
pub fn taylor_identity_check(
    grid: &GridMeasure,
    lambda: f64,
    f: impl Fn(f64) -> f64,
    f1: impl Fn(f64) -> f64,
    f2: impl Fn(f64) -> f64,
) -> TaylorReport {
    let (m, n) = (grid.m, grid.n);
    let (mf, nf) = (m as f64, n as f64);
    let mut int_f = 0.0;
    let mut drift = 0.0;
    let mut diffusion = 0.0;
    for k in 0..=m {
        let kf = k as f64;
        for l in 0..=n {
            let w = grid.at(k as i64, l as i64);
            if w == 0.0 {
                continue;
            }
            let x = l as f64 / nf;
            int_f += w * f(x);
            drift += w * (kf * (1.0 - x) - (mf - kf) * x) * f1(x);
            diffusion += w * (kf * (1.0 - x) + (mf - kf) * x) * f2(x);
        }
    }
    let lhs = (lambda - 1.0) * int_f;
    let rhs = drift / ((mf + nf) * nf)
        + diffusion / (2.0 * (mf + nf) * nf * nf)
        + 0.5 * (lambda - 1.0) * (f(0.0) + f(1.0));
    let gap = (lhs - rhs).abs();
    TaylorReport {
        lhs,
        rhs,
        gap,
        scaled_gap: gap * nf.powi(3),
    }
}

/// Exact QSD of `K_{m,n}` on the full grid together with its rate.
pub fn exact_qsd_grid(m: usize, n: usize) -> Result<(GridMeasure, f64)> {
    let s = build_s(m, n)?;
    let perron = perron_left(&s, PerronOptions::default())?;
    let grid = GridMeasure::from_states(m, n, s.states(), &perron.left_vector)?;
    Ok((grid, perron.lambda))
}

/// Limit diagnostics of the exact QSD, including the eigen-identity residual
/// and the Taylor gap for `f(x) = x^3`.
pub fn limit_diagnostics(m: usize, n: usize) -> Result<LimitDiagnostics> {
    let (grid, lambda) = exact_qsd_grid(m, n)?;
    let mut diag = compare_grid_to_limit(&grid);
    diag.sl_residual = Some(sl_decompose(&grid, lambda)?.residual);
    diag.taylor_gap = Some(taylor_identity_check(&grid, lambda, |x| x.powi(3), |x| 3.0 * x * x, |x| 6.0 * x).gap);
    Ok(diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn joint_density_values() {
        assert_eq!(limit_joint_density(2, 1, 0.5).unwrap(), 0.5);
        let total: f64 = (0..=5).map(|k| limit_joint_density(5, k, 0.3).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(limit_joint_density(2, 3, 0.5).is_err());
        assert!(limit_joint_density(2, 1, 1.5).is_err());
        for m in 1..=6 {
            for k in 0..=m {
                let mass = simpson(&|x| limit_joint_density(m, k, x).unwrap(), 0.0, 1.0, 2000);
                assert!((mass - 1.0 / (m + 1) as f64).abs() < 1e-10, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn conditionals() {
        let beta0 = conditional_x_given_k(1, 0).unwrap();
        let beta1 = conditional_x_given_k(1, 1).unwrap();
        for x in [0.0, 0.2, 0.7, 1.0] {
            assert!((beta0.pdf(x) - 2.0 * (1.0 - x)).abs() < 1e-15);
            assert!((beta1.pdf(x) - 2.0 * x).abs() < 1e-15);
        }
        assert_eq!(beta0.params(), (1.0, 2.0));
        assert_eq!(conditional_k_given_x(4, 0.0).unwrap(), vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        let pmf = conditional_k_given_x(7, 0.35).unwrap();
        let mean: f64 = pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        assert!((mean - 7.0 * 0.35).abs() < 1e-14);
    }

    #[test]
    fn beta_cdf_integrates_pdf() {
        for (m, k) in [(1, 0), (2, 1), (4, 3), (6, 0)] {
            let beta = conditional_x_given_k(m, k).unwrap();
            for x in [0.1, 0.5, 0.83] {
                let integral = simpson(&|s| beta.pdf(s), 0.0, x, 2000);
                assert!((beta.cdf(x) - integral).abs() < 1e-12, "m={m} k={k} x={x}");
            }
            assert_eq!(beta.cdf(0.0), 0.0);
            assert_eq!(beta.cdf(1.0), 1.0);
        }
    }

    #[test]
    fn self_comparison_is_within_grid_resolution() {
        for (m, n) in [(1, 10), (2, 50), (3, 200)] {
            let grid = GridMeasure::discretized_limit(m, n).unwrap();
            let d = compare_grid_to_limit(&grid);
            let res = 1.0 / n as f64 + 1e-12;
            assert!(d.ks_marginal <= res, "{d:?}");
            assert!(d.max_tv_binomial() <= 1e-12, "{d:?}");
            // Atoms of the conditional carry up to (max density) / n of mass.
            assert!(d.max_ks_beta() <= (m + 1) as f64 / n as f64, "{d:?}");
        }
    }

    #[test]
    fn sl_identities_on_exact_qsd() {
        let (grid, lambda) = exact_qsd_grid(1, 3).unwrap();
        let sl = sl_decompose(&grid, lambda).unwrap();
        assert!(sl.residual <= 1e-12, "{}", sl.residual);
        assert!(sl.s_telescoping <= 1e-12);
        assert!(sl.l_telescoping <= 1e-12);
        assert!(sl.d_difference <= 1e-15);
        let (m, n) = (1, 3);
        assert!((sl.s_at(m, n) - sl.s_at(0, 0)).abs() <= 1e-15);
        assert!((sl.l_at(m, n) - sl.l_at(0, 0)).abs() <= 1e-15);
        assert!((lambda - 1.0 + 2.0 * (sl.s_at(0, 0) + sl.l_at(0, 0))).abs() <= 1e-13);
    }

    #[test]
    fn sl_residual_detects_wrong_lambda() {
        let (grid, lambda) = exact_qsd_grid(2, 5).unwrap();
        assert!(sl_decompose(&grid, lambda - 1e-3).unwrap().residual > 1e-6);
    }

    #[test]
    fn stein_polynomials() {
        let one = stein_check(|_| 1.0, |_| 0.0, SteinMeasure::Uniform);
        assert!((one.lhs - 2.0).abs() < 1e-12 && one.rhs == 2.0);
        let lin = stein_check(|x| x, |_| 0.0, SteinMeasure::Uniform);
        assert!((lin.lhs - 1.0).abs() < 1e-12 && lin.rhs == 1.0);
        let quad = stein_check(|x| x * x, |_| 2.0, SteinMeasure::Uniform);
        assert!((quad.lhs - 1.0).abs() < 1e-12 && quad.rhs == 1.0);
        for j in 3..=6 {
            let jf = j as f64;
            let r = stein_check(|x| x.powi(j), |x| jf * (jf - 1.0) * x.powi(j - 2), SteinMeasure::Uniform);
            assert!(r.gap <= 1e-9, "degree {j}: {r:?}");
        }
        // A non-uniform measure fails the identity.
        let atoms = [(0.3, 1.0)];
        let r = stein_check(|x| x * x * x, |x| 6.0 * x, SteinMeasure::Discrete(&atoms));
        assert!(r.gap > 0.1);
    }

    #[test]
    fn taylor_identity_is_exact_up_to_degree_two() {
        let (grid, lambda) = exact_qsd_grid(2, 20).unwrap();
        let constant = taylor_identity_check(&grid, lambda, |_| 1.0, |_| 0.0, |_| 0.0);
        assert!(constant.gap <= 1e-12);
        let quad = taylor_identity_check(&grid, lambda, |x| x * x, |x| 2.0 * x, |_| 2.0);
        // Exact up to the eigen-residual of the computed QSD.
        assert!(quad.gap <= 1e-12);
    }

    #[test]
    fn grid_embedding() {
        let kernel = InducedKernel::new(1, 3).unwrap();
        let nu = vec![0.25; 4];
        let grid = GridMeasure::from_states(1, 3, kernel.transient_states(), &nu).unwrap();
        assert_eq!(grid.at(0, 0), 0.0);
        assert_eq!(grid.at(0, 3), 0.0);
        assert_eq!(grid.at(0, 1), 0.25);
        assert_eq!(grid.at(-1, 1), 0.0);
        assert!(GridMeasure::new(1, 3, vec![0.0; 5]).is_err());
    }
}
