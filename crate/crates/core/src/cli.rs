//! Experiment runners behind the `invasion-qsd` binary.
//!
//! Each subcommand is resolved into a [`RunConfig`], optionally overridden
//! field-by-field from a JSON file, and executed by [`execute`], which
//! returns the bytes to write. Identical configurations give identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dual::{self, PairChainState};
use crate::error::{Error, Result};
use crate::estimators::{
    default_burn_in, estimate_qsd_conditional, estimate_qsd_restart, first_time_below,
    induced_survival_tail, regress_lambda, write_tail_csv, DEFAULT_TRIM,
};
use crate::induced::{check_partition_sizes, InducedKernel, InducedState};
use crate::io::{fmt_f64, json_with_meta, to_json_string, write_atomic, Metadata};
use crate::limit::{compare_grid_to_limit, sl_decompose, taylor_identity_check, GridMeasure};
use crate::rng::seeded;
use crate::spectral::{
    build_s, build_s_capped, full_spectrum, perron_left_warm, reflect, spectrum_diagnostics,
    write_qsd_csv, PerronOptions, PerronResult, SubstochasticMatrix, DEFAULT_DIM_CAP,
};

/// Dimension up to which `lambda` adds the Perron root of the full induced
/// matrix to its report.
pub const LAMBDA_SPECTRAL_CAP: usize = 1500;

/// Squarings used to warm-start power iteration on the induced matrix.
const WARM_SQUARINGS: u32 = 20;

#[derive(Debug, Parser)]
#[command(name = "invasion-qsd", version = crate::io::VERSION, about = "QSDs and survival rates of the Invasion model on K_{m,n}")]
pub struct Cli {
    /// JSON file whose fields override the command-line values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads for replica-parallel commands.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct Size {
    #[arg(short, long)]
    pub m: usize,
    #[arg(short, long)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Survival rate by every available route.
    Lambda {
        #[command(flatten)]
        size: Size,
    },
    /// QSD table `k,l,nu`.
    Qsd {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value_t = QsdMethod::Exact)]
        method: QsdMethod,
        /// Restart estimator step budget.
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long)]
        burn_in: Option<u64>,
        /// Conditional estimator replica count.
        #[arg(long)]
        replicas: Option<u64>,
        /// Conditioning time; by default survival from the start is about 10%.
        #[arg(long)]
        t_star: Option<u64>,
    },
    /// Empirical survival tail and its log-linear regression.
    Tail {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        replicas: Option<u64>,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        trim: Option<f64>,
        /// Where to write the regression JSON; next to `--out` by default.
        #[arg(long)]
        regression_out: Option<PathBuf>,
    },
    /// Eigenvalues of the induced matrix and their midpoint reflection.
    Spectrum {
        #[command(flatten)]
        size: Size,
    },
    /// Distances of the exact QSD to the large-n limit.
    LimitCheck {
        #[command(flatten)]
        size: Size,
    },
    /// Tail of the pair coalescence time.
    Sigma {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        replicas: Option<u64>,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long, value_enum)]
        start: Option<PairStart>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Lambda,
    Qsd,
    Tail,
    Spectrum,
    LimitCheck,
    Sigma,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Lambda => "lambda",
            Command::Qsd => "qsd",
            Command::Tail => "tail",
            Command::Spectrum => "spectrum",
            Command::LimitCheck => "limit-check",
            Command::Sigma => "sigma",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QsdMethod {
    Exact,
    Restart,
    Conditional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairStart {
    BothLarge,
    BothSmall,
    Split,
}

impl From<PairStart> for PairChainState {
    fn from(s: PairStart) -> Self {
        match s {
            PairStart::BothLarge => PairChainState::BothLarge,
            PairStart::BothSmall => PairChainState::BothSmall,
            PairStart::Split => PairChainState::Split,
        }
    }
}

/// Everything a run depends on. Unset budgets fall back to per-command
/// defaults when executed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub threads: usize,
    pub method: QsdMethod,
    pub steps: Option<u64>,
    pub burn_in: Option<u64>,
    pub replicas: Option<u64>,
    pub horizon: Option<u64>,
    pub t_star: Option<u64>,
    pub trim: f64,
    pub start: PairStart,
    pub tol: f64,
    pub max_iter: u64,
    pub out: Option<PathBuf>,
    pub regression_out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, m: usize, n: usize) -> Self {
        let perron = PerronOptions::default();
        RunConfig {
            command,
            m,
            n,
            seed: 1,
            threads: 1,
            method: QsdMethod::Exact,
            steps: None,
            burn_in: None,
            replicas: None,
            horizon: None,
            t_star: None,
            trim: DEFAULT_TRIM,
            start: PairStart::Split,
            tol: perron.tol,
            max_iter: perron.max_iter,
            out: None,
            regression_out: None,
        }
    }

    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let mut cfg = match &cli.command {
            CommandArgs::Lambda { size } => RunConfig::new(Command::Lambda, size.m, size.n),
            CommandArgs::Qsd {
                size,
                method,
                steps,
                burn_in,
                replicas,
                t_star,
            } => RunConfig {
                method: *method,
                steps: *steps,
                burn_in: *burn_in,
                replicas: *replicas,
                t_star: *t_star,
                ..RunConfig::new(Command::Qsd, size.m, size.n)
            },
            CommandArgs::Tail {
                size,
                replicas,
                horizon,
                trim,
                regression_out,
            } => RunConfig {
                replicas: *replicas,
                horizon: *horizon,
                trim: trim.unwrap_or(DEFAULT_TRIM),
                regression_out: regression_out.clone(),
                ..RunConfig::new(Command::Tail, size.m, size.n)
            },
            CommandArgs::Spectrum { size } => RunConfig::new(Command::Spectrum, size.m, size.n),
            CommandArgs::LimitCheck { size } => RunConfig::new(Command::LimitCheck, size.m, size.n),
            CommandArgs::Sigma {
                size,
                replicas,
                horizon,
                start,
            } => RunConfig {
                replicas: *replicas,
                horizon: *horizon,
                start: start.unwrap_or(PairStart::Split),
                ..RunConfig::new(Command::Sigma, size.m, size.n)
            },
        };
        cfg.seed = cli.seed;
        cfg.threads = cli.threads;
        cfg.out = cli.out.clone();
        if let Some(path) = &cli.config {
            let text = fs::read_to_string(path)?;
            cfg = cfg.with_overrides(serde_json::from_str(&text)?)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Replaces the fields present in a JSON object.
    pub fn with_overrides(self, overrides: Value) -> Result<Self> {
        let Value::Object(fields) = overrides else {
            return Err(Error::invalid("config file must hold a JSON object"));
        };
        let mut base = serde_json::to_value(&self)?;
        let target = base.as_object_mut().expect("RunConfig serializes to an object");
        for (k, v) in fields {
            if !target.contains_key(&k) {
                return Err(Error::invalid(format!("unknown config field `{k}`")));
            }
            target.insert(k, v);
        }
        Ok(serde_json::from_value(base)?)
    }

    pub fn validate(&self) -> Result<()> {
        check_partition_sizes(self.m, self.n)?;
        if self.threads == 0 {
            return Err(Error::invalid("threads must be positive"));
        }
        for (name, v) in [
            ("steps", self.steps),
            ("replicas", self.replicas),
            ("horizon", self.horizon),
        ] {
            if v == Some(0) {
                return Err(Error::invalid(format!("{name} must be positive")));
            }
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::invalid("tol and max_iter must be positive"));
        }
        Ok(())
    }

    fn perron_options(&self) -> PerronOptions {
        PerronOptions {
            tol: self.tol,
            max_iter: self.max_iter,
        }
    }

    fn metadata(&self) -> Metadata {
        Metadata::new(self.command.name(), self.m, self.n)
    }
}

/// Bytes produced by a run: the main output and, for `tail`, the regression
/// report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub primary: String,
    pub secondary: Option<String>,
}

/// Runs the configured command on a dedicated thread pool.
pub fn execute(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    pool.install(|| match cfg.command {
        Command::Lambda => single_json(cmd_lambda(cfg)?),
        Command::Qsd => Ok(RunOutput {
            primary: cmd_qsd(cfg)?,
            secondary: None,
        }),
        Command::Tail => {
            let (csv, report) = cmd_tail(cfg)?;
            Ok(RunOutput {
                primary: csv,
                secondary: Some(to_json_string(&report)?),
            })
        }
        Command::Spectrum => Ok(RunOutput {
            primary: cmd_spectrum(cfg)?,
            secondary: None,
        }),
        Command::LimitCheck => single_json(cmd_limit_check(cfg)?),
        Command::Sigma => Ok(RunOutput {
            primary: cmd_sigma(cfg)?,
            secondary: None,
        }),
    })
}

fn single_json(v: Value) -> Result<RunOutput> {
    Ok(RunOutput {
        primary: to_json_string(&v)?,
        secondary: None,
    })
}

/// Writes the outputs where the configuration says. Without `out`, the
/// primary output goes to stdout and a secondary one to stderr unless
/// `regression_out` is set.
pub fn emit(cfg: &RunConfig, output: &RunOutput) -> Result<()> {
    match &cfg.out {
        Some(path) => write_text(path, &output.primary)?,
        None => print!("{}", output.primary),
    }
    if let Some(text) = &output.secondary {
        let target = cfg
            .regression_out
            .clone()
            .or_else(|| cfg.out.as_ref().map(|p| p.with_extension("regression.json")));
        match target {
            Some(path) => write_text(&path, text)?,
            None => eprint!("{text}"),
        }
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    write_atomic(path, |w| w.write_all(text.as_bytes()))
}

fn csv_with_meta(meta: &Metadata, body: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    meta.write_csv_header(&mut buf)?;
    body(&mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

fn exact_qsd(cfg: &RunConfig, cap: usize) -> Result<(SubstochasticMatrix, PerronResult)> {
    let s = build_s_capped(cfg.m, cfg.n, cap)?;
    let perron = perron_left_warm(&s, WARM_SQUARINGS, cfg.perron_options())?;
    Ok((s, perron))
}

/// Survival rate from the pair matrix, the closed forms, and (when small
/// enough) the Perron root of the induced matrix, with pairwise gaps.
pub fn cmd_lambda(cfg: &RunConfig) -> Result<Value> {
    let (m, n) = (cfg.m, cfg.n);
    let report = dual::lambda_report(m, n)?;
    let mut values: Vec<(&str, f64)> = vec![
        ("lambda_cmc_numeric", report.lambda_numeric),
        ("lambda_asymptotic", report.lambda_asymptotic),
    ];
    if let Some(c) = report.lambda_closed_m1 {
        values.push(("lambda_closed_m1", c));
    }
    let mut notes = Vec::new();
    let spectral = match exact_qsd(cfg, LAMBDA_SPECTRAL_CAP) {
        Ok((_, perron)) => {
            values.push(("lambda_spectral", perron.lambda));
            Some(json!({
                "lambda": perron.lambda,
                "iterations": perron.iterations,
                "residual": perron.residual,
                "dim": perron.left_vector.len(),
            }))
        }
        Err(e @ (Error::SizeCap { .. } | Error::NonConvergence { .. })) => {
            notes.push(format!("spectral entry omitted: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let mut gaps = serde_json::Map::new();
    for (i, (a, x)) in values.iter().enumerate() {
        for (b, y) in &values[i + 1..] {
            gaps.insert(format!("{a}-{b}"), json!((x - y).abs()));
        }
    }
    let body = json!({
        "pair_chain": report,
        "spectral": spectral,
        "voter_lambda": dual::lambda_voter(m, n),
        "ratio_to_4_over_n3": (1.0 - report.lambda_numeric) * (n as f64).powi(3) / 4.0,
        "gaps": gaps,
        "notes": notes,
    });
    json_with_meta(&cfg.metadata(), &body)
}

/// The figure's starting state: one "yes" in the small partition and
/// `ceil(n/2)` in the large one.
pub fn figure_initial_state(m: usize, n: usize) -> InducedState {
    let _ = m;
    InducedState::new(1, n.div_ceil(2))
}

/// Smallest `t` at which the exact survival probability from `initial` drops
/// to `level`.
pub fn conditioning_time(m: usize, n: usize, initial: InducedState, level: f64) -> Result<u64> {
    let s = build_s(m, n)?;
    let kernel = InducedKernel::new(m, n)?;
    let index = kernel
        .transient_index(initial)
        .ok_or_else(|| Error::invalid(format!("{initial:?} is not transient")))?;
    let lambda = dual::lambda_cmc_numeric(m, n)?;
    // Generous horizon: the tail decays no slower than lambda^t past its transient.
    let horizon = (10.0 * (1.0 / level).ln() / (1.0 - lambda)).ceil() as u64 + 100;
    let curve = s.survival_curve(index, horizon);
    first_time_below(&curve, level).ok_or(Error::NonConvergence {
        iterations: horizon,
        residual: curve[curve.len() - 1],
    })
}

pub fn cmd_qsd(cfg: &RunConfig) -> Result<String> {
    let (m, n) = (cfg.m, cfg.n);
    let mut meta = cfg.metadata().with_budget("method", format!("{:?}", cfg.method).to_lowercase());
    let initial = figure_initial_state(m, n);
    match cfg.method {
        QsdMethod::Exact => {
            let (s, perron) = exact_qsd(cfg, DEFAULT_DIM_CAP)?;
            meta = meta
                .with_budget("lambda", fmt_f64(perron.lambda))
                .with_budget("iterations", perron.iterations)
                .with_budget("residual", fmt_f64(perron.residual));
            csv_with_meta(&meta, |w| write_qsd_csv(w, s.states(), &perron.left_vector))
        }
        QsdMethod::Restart => {
            let kernel = InducedKernel::new(m, n)?;
            let steps = cfg.steps.unwrap_or(10_000_000);
            let burn_in = cfg.burn_in.unwrap_or_else(|| default_burn_in(steps));
            let est = estimate_qsd_restart(&kernel, initial, steps, burn_in, &mut seeded(cfg.seed))?;
            meta = meta
                .with_seed(cfg.seed)
                .with_budget("steps", steps)
                .with_budget("burn_in", burn_in)
                .with_budget("initial", format!("{},{}", initial.k, initial.l));
            csv_with_meta(&meta, |w| est.write_csv(w))
        }
        QsdMethod::Conditional => {
            let kernel = InducedKernel::new(m, n)?;
            let replicas = cfg.replicas.unwrap_or(1_000_000);
            let t_star = match cfg.t_star {
                Some(t) => t,
                None => conditioning_time(m, n, initial, 0.1)?,
            };
            let est = estimate_qsd_conditional(&kernel, initial, t_star, replicas, cfg.seed)?;
            meta = meta
                .with_seed(cfg.seed)
                .with_budget("replicas", replicas)
                .with_budget("t_star", t_star)
                .with_budget("survivors", est.total())
                .with_budget("initial", format!("{},{}", initial.k, initial.l));
            csv_with_meta(&meta, |w| est.write_csv(w))
        }
    }
}

/// Horizon long enough for the tail to fall far below any trim level:
/// `ceil(2 ln(10^5) / (1 - lambda))`.
pub fn default_horizon(lambda: f64) -> u64 {
    (2.0 * 1e5f64.ln() / (1.0 - lambda)).ceil() as u64
}

pub fn cmd_tail(cfg: &RunConfig) -> Result<(String, Value)> {
    let (m, n) = (cfg.m, cfg.n);
    let kernel = InducedKernel::new(m, n)?;
    let lambda = dual::lambda_cmc_numeric(m, n)?;
    let replicas = cfg.replicas.unwrap_or(100_000);
    let horizon = cfg.horizon.unwrap_or_else(|| default_horizon(lambda));
    let initial = figure_initial_state(m, n);
    let tail = induced_survival_tail(&kernel, initial, horizon, replicas, cfg.seed)?;
    let fit = regress_lambda(&tail.p_hat(), cfg.trim)?;
    let meta = cfg
        .metadata()
        .with_seed(cfg.seed)
        .with_budget("replicas", replicas)
        .with_budget("horizon", horizon)
        .with_budget("trim", cfg.trim)
        .with_budget("initial", format!("{},{}", initial.k, initial.l));
    let csv = csv_with_meta(&meta, |w| write_tail_csv(w, &tail))?;
    let body = json!({
        "regression": fit,
        "lambda_cmc_numeric": lambda,
        "relative_error_of_gap": (1.0 - fit.lambda_hat) / (1.0 - lambda) - 1.0,
    });
    Ok((csv, json_with_meta(&meta, &body)?))
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<String> {
    let s = build_s(cfg.m, cfg.n)?;
    let eigs = full_spectrum(&s)?;
    let diag = spectrum_diagnostics(&eigs);
    let re: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    let reflected = reflect(&re);
    let meta = cfg
        .metadata()
        .with_budget("count", diag.count)
        .with_budget("max_abs_imag", fmt_f64(diag.max_abs_imag))
        .with_budget("midpoint", fmt_f64(diag.midpoint))
        .with_budget("reflection_distance", fmt_f64(diag.reflection_distance));
    csv_with_meta(&meta, |w| {
        use std::io::Write;
        writeln!(w, "re,im,reflected")?;
        for (z, r) in eigs.iter().zip(&reflected) {
            writeln!(w, "{},{},{}", fmt_f64(z.re), fmt_f64(z.im), fmt_f64(*r))?;
        }
        Ok(())
    })
}

pub fn cmd_limit_check(cfg: &RunConfig) -> Result<Value> {
    let (s, perron) = exact_qsd(cfg, DEFAULT_DIM_CAP)?;
    let grid = GridMeasure::from_states(cfg.m, cfg.n, s.states(), &perron.left_vector)?;
    let sl = sl_decompose(&grid, perron.lambda)?;
    let taylor = taylor_identity_check(&grid, perron.lambda, |x| x.powi(3), |x| 3.0 * x * x, |x| 6.0 * x);
    let mut diag = compare_grid_to_limit(&grid);
    diag.sl_residual = Some(sl.residual);
    diag.taylor_gap = Some(taylor.gap);
    let body = json!({
        "diagnostics": diag,
        "lambda": perron.lambda,
        "s_telescoping": sl.s_telescoping,
        "l_telescoping": sl.l_telescoping,
        "taylor": taylor,
    });
    json_with_meta(&cfg.metadata(), &body)
}

pub fn cmd_sigma(cfg: &RunConfig) -> Result<String> {
    let (m, n) = (cfg.m, cfg.n);
    let lambda = dual::lambda_cmc_numeric(m, n)?;
    let replicas = cfg.replicas.unwrap_or(100_000);
    let horizon = cfg.horizon.unwrap_or_else(|| default_horizon(lambda));
    let tail = dual::sigma_tail(m, n, cfg.start.into(), replicas, horizon, cfg.seed)?;
    let meta = cfg
        .metadata()
        .with_seed(cfg.seed)
        .with_budget("replicas", replicas)
        .with_budget("horizon", horizon)
        .with_budget("start", format!("{:?}", cfg.start));
    csv_with_meta(&meta, |w| write_tail_csv(w, &tail))
}
