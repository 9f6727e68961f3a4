//! Frequentist confidence regions assisted by Bayesian priors.
//!
//! The regions have exact frequentist coverage for every value of the
//! parameter, while their shape (and the point estimate they collapse to)
//! is chosen to minimise prior-expected volume. Gaussian-likelihood models
//! live in [`fab_gaussian`], discrete exponential families in [`fab_nef`].

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod exec;
pub mod fab_nef;
pub mod fab_gaussian;
pub mod priors;
pub mod regression;
pub mod roots;
pub mod simulate;
pub mod specfun;

pub use error::{FabError, Result};
pub use exec::Execution;
