//! Monte Carlo simulator of a Poisson field of interferers around a receiver
//! with n antennas and independent Rayleigh fading per antenna.
//!
//! Two estimator families are provided for every probability:
//!
//! * naive: indicators of the SIR events on fully sampled fading;
//! * conditioned: the fading is integrated out given the point pattern, so a
//!   realization contributes q(Φ) = ∏_x (1 + θ_r‖x‖^{−α})^{−1} and its
//!   powers.
//!
//! Realization i of a run draws from its own ChaCha8 stream (seed, i), and
//! per-realization values are reduced in index order, so results are
//! bit-identical for any number of worker threads.

mod config;
mod dump;
mod estimators;
mod farfield;
mod sampling;

pub use config::{required_disk_radius, Method, SimConfig};
pub use dump::write_realization_dump;
pub use estimators::{
    estimate_first_success_tail, estimate_indicator_correlation, estimate_joint_success,
    estimate_selection_combining, estimate_two_antenna_joint, ConditionedSamples, Estimate,
    NaiveSamples, BOOTSTRAP_RESAMPLES,
};
pub use farfield::far_field_log_factor;
pub use sampling::{
    conditional_success, realization_rng, sample_realization, sir_at_antennas, ConditionalSuccess,
    Realization,
};
