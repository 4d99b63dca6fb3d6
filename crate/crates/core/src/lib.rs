//! Invasion opinion dynamics on complete bipartite graphs `K_{m,n}`: exact
//! and simulated quasistationary distributions, survival rates, and checks
//! of the large-`n` limit of the QSD.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`] and [`dynamics`]: graphs, edge measures, and the forward chain.
//! - [`induced`]: the exact lumping onto `(k, l)` yes-counts.
//! - [`dual`]: the coalescing reverse flow and the three-state pair chain
//!   whose spectral radius is the survival rate.
//! - [`spectral`]: Perron vector, spectrum, and absorption times.
//! - [`estimators`]: Monte-Carlo QSD estimators and tail regression.
//! - [`limit`]: the limit density and diagnostics against it.
//! - [`cli`]: the experiment runners behind the `invasion-qsd` binary.

pub mod cli;
pub mod dual;
pub mod dynamics;
pub mod error;
pub mod estimators;
pub mod graph;
pub mod induced;
pub mod io;
pub mod limit;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
