//! Diversity loss from interference correlation in Poisson networks with
//! multi-antenna (SIMO) receivers.
//!
//! * [`specfun`]: log-gamma, beta and the diversity polynomial D_n(x).
//! * [`analytic`]: closed-form joint, conditional and selection-combining
//!   success probabilities, correlation of success indicators, and the
//!   two-antenna joint SIR law.
//! * [`mcsim`]: a Poisson-network Monte Carlo simulator with naive and
//!   conditioned (fading integrated out) estimators for the same quantities.
//! * [`cli`]: the `sirdiv` command line: evaluation, simulation,
//!   analytic-vs-simulation comparison and figure data.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod mcsim;
pub mod specfun;
mod xprec;

pub use error::{Error, Result};
