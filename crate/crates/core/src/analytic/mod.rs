//! Closed-form success probabilities for a receiver with n antennas in a
//! Poisson field of interferers with Rayleigh fading.
//!
//! Every probability is expressed through the load Δθ^δ (see
//! [`NormalizedParams::load`]). θ = 0 gives success probability 1.

mod params;
mod selection;

pub use params::{ModelParams, NormalizedParams, Threshold};
pub use selection::{selection_combining_curve, selection_combining_prob, SELECTION_MAX_N};

use crate::error::{domain, Result};
use crate::specfun::{diversity_poly_unchecked, ln_diversity_poly_unchecked, DiversityOrder};

/// P_1(θ) = exp(−Δθ^δ).
pub fn single_success_prob(p: &NormalizedParams, theta: Threshold) -> f64 {
    (-p.load(theta)).exp()
}

/// P_n(θ) = exp(−Δθ^δ D_n(δ)): SIR exceeds θ at every antenna.
pub fn joint_success_prob(p: &NormalizedParams, n: DiversityOrder, theta: Threshold) -> f64 {
    (-p.load(theta) * diversity_poly_unchecked(n.get(), p.stability())).exp()
}

/// exp(−Δθ^δ n), what P_n would be with independent interference per antenna.
pub fn independent_joint_prob(p: &NormalizedParams, n: DiversityOrder, theta: Threshold) -> f64 {
    (-p.load(theta) * n.get() as f64).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbBounds {
    pub lower: f64,
    pub upper: f64,
}

/// exp(−Δθ^δ n^δ/Γ(1+δ)) < P_n(θ) < exp(−Δθ^δ n^δ) for n ≥ 2.
pub fn joint_prob_bounds(p: &NormalizedParams, n: DiversityOrder, theta: Threshold) -> ProbBounds {
    let load = p.load(theta);
    let growth = (n.get() as f64).powf(p.stability());
    let gamma = crate::specfun::gamma_pos(1.0 + p.stability());
    ProbBounds {
        lower: (-load * growth / gamma).exp(),
        upper: (-load * growth).exp(),
    }
}

/// L(n) = n / D_n(δ) = nδβ(n, δ), the ratio of log success probabilities
/// with independent and with correlated interference.
pub fn diversity_loss(n: DiversityOrder, stability: f64) -> Result<f64> {
    if !(stability > 0.0 && stability < 1.0) {
        return domain(format!("δ must lie in (0, 1), got {stability}"));
    }
    let n = n.get();
    if n == 1 {
        return Ok(1.0);
    }
    Ok(((n as f64).ln() - ln_diversity_poly_unchecked(n, stability)).exp())
}

/// P(S_{k+1} | S_1 ∩ … ∩ S_k) = exp(−Δθ^δ D_k(δ) δ/k).
pub fn conditional_success_prob(p: &NormalizedParams, k: DiversityOrder, theta: Threshold) -> f64 {
    let k = k.get();
    let delta = p.stability();
    (-p.load(theta) * diversity_poly_unchecked(k, delta) * delta / k as f64).exp()
}

/// Pearson correlation of the success indicators at two distinct antennas.
///
/// At zero load the ratio is 0/0 and the limit 1 − δ is returned.
pub fn indicator_correlation(p: &NormalizedParams, theta: Threshold) -> f64 {
    let load = p.load(theta);
    let delta = p.stability();
    if load == 0.0 {
        return 1.0 - delta;
    }
    (-load * delta).exp() * (-load * (1.0 - delta)).exp_m1() / (-load).exp_m1()
}

/// 1 − (1 − e^{−Δθ^δ})^n, selection combining with independent interference.
pub fn independent_selection_prob(
    p: &NormalizedParams,
    n: DiversityOrder,
    theta: Threshold,
) -> f64 {
    let single = (-p.load(theta)).exp();
    -(n.get() as f64 * (-single).ln_1p()).exp_m1()
}

/// Relative gap |θ₁ − θ₂| / max(θ₁, θ₂) below which the diagonal limit of
/// the two-antenna exponent is used.
pub const DIAGONAL_TOL: f64 = 1e-9;

/// (θ₁^{1+δ} − θ₂^{1+δ}) / (θ₁ − θ₂), with its limit (1+δ)θ^δ on the diagonal.
pub fn two_antenna_exponent(stability: f64, theta1: Threshold, theta2: Threshold) -> f64 {
    let (hi, lo) = if theta1.get() >= theta2.get() {
        (theta1.get(), theta2.get())
    } else {
        (theta2.get(), theta1.get())
    };
    if hi == 0.0 {
        return 0.0;
    }
    if hi - lo <= DIAGONAL_TOL * hi {
        return (1.0 + stability) * (0.5 * (hi + lo)).powf(stability);
    }
    let ratio = lo / hi;
    // (1 − t^{1+δ}) / (1 − t) with t = θ_lo/θ_hi
    let quotient = if ratio < 0.5 {
        (1.0 - ratio.powf(1.0 + stability)) / (1.0 - ratio)
    } else {
        let v = ratio.ln();
        ((1.0 + stability) * v).exp_m1() / v.exp_m1()
    };
    hi.powf(stability) * quotient
}

/// P(SIR₁ > θ₁, SIR₂ > θ₂).
pub fn joint_two_antenna_success(p: &NormalizedParams, theta1: Threshold, theta2: Threshold) -> f64 {
    (-p.contention() * two_antenna_exponent(p.stability(), theta1, theta2)).exp()
}

/// P(SIR₁ < θ₁, SIR₂ < θ₂).
pub fn joint_two_antenna_cdf(p: &NormalizedParams, theta1: Threshold, theta2: Threshold) -> f64 {
    let s1 = single_success_prob(p, theta1);
    let s2 = single_success_prob(p, theta2);
    let both = joint_two_antenna_success(p, theta1, theta2);
    ((1.0 - s1) - (s2 - both)).clamp(0.0, 1.0)
}

/// exp(−Δ(θ₁^δ + θ₂^δ)).
pub fn independent_two_antenna_success(
    p: &NormalizedParams,
    theta1: Threshold,
    theta2: Threshold,
) -> f64 {
    let d = p.stability();
    (-p.contention() * (theta1.get().powf(d) + theta2.get().powf(d))).exp()
}
