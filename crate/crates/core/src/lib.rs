//! Adaptive MC³ and Gibbs samplers for Bayesian model averaging in normal
//! linear regression under g-priors.
//!
//! * [`core_model`]: marginal likelihood, beta-binomial model prior, g priors.
//! * [`samplers`]: MC³, Gibbs, their adaptive variants and the g step.
//! * [`diagnostics`]: PIPs, Parzen-window IACT, ESS and efficiency reports.
//! * [`oracle`]: exact posterior by enumeration for small p.
//! * [`data_io`]: CSV ingestion, simulation and output formats.
//! * [`cli`]: the `bma` command-line front end.
//!
//! ```
//! use bma_adapt::core_model::{GMode, PriorConfig};
//! use bma_adapt::data_io::simulate_dataset;
//! use bma_adapt::samplers::{run_chain, ChainConfig, Method};
//!
//! let (data, _truth) = simulate_dataset(50, 10, 1, true).unwrap();
//! let prior = PriorConfig::new(10, 7.0, GMode::GBric).unwrap();
//! let mut cfg = ChainConfig::desk("admc3-s2".parse::<Method>().unwrap(), 10, 7);
//! cfg.iterations = 20_000;
//! cfg.burn_in = 1_000;
//! cfg.adaptation.start_block = 1;
//! let out = run_chain(&cfg, &data, &prior).unwrap();
//! let pips = bma_adapt::diagnostics::pip(&out).unwrap();
//! assert_eq!(pips.len(), 10);
//! ```

pub mod cli;
pub mod core_model;
pub mod data_io;
pub mod diagnostics;
mod error;
pub mod exec;
pub mod oracle;
pub mod samplers;

pub use error::{BmaError, Result};
