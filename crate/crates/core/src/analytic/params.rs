use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specfun::ln_gamma_pos;

/// Physical network parameters: interferer intensity λ (per unit area),
/// link distance r and path-loss exponent α > 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    intensity: f64,
    link_distance: f64,
    path_loss_exp: f64,
    stability: f64,
    contention: f64,
}

impl ModelParams {
    pub fn new(intensity: f64, link_distance: f64, path_loss_exp: f64) -> Result<Self> {
        if !(intensity > 0.0 && intensity.is_finite()) {
            return domain(format!("intensity must be positive, got {intensity}"));
        }
        if !(link_distance > 0.0 && link_distance.is_finite()) {
            return domain(format!("link distance must be positive, got {link_distance}"));
        }
        if !(path_loss_exp > 2.0 && path_loss_exp.is_finite()) {
            return domain(format!(
                "path-loss exponent must exceed 2 (interference is infinite otherwise), got {path_loss_exp}"
            ));
        }
        let stability = 2.0 / path_loss_exp;
        let contention =
            intensity * PI * link_distance * link_distance * gamma_reflection_product(stability);
        Ok(Self {
            intensity,
            link_distance,
            path_loss_exp,
            stability,
            contention,
        })
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn link_distance(&self) -> f64 {
        self.link_distance
    }

    pub fn path_loss_exp(&self) -> f64 {
        self.path_loss_exp
    }

    /// δ = 2/α.
    pub fn stability(&self) -> f64 {
        self.stability
    }

    /// Δ = λπr²Γ(1+δ)Γ(1−δ).
    pub fn contention(&self) -> f64 {
        self.contention
    }

    pub fn normalized(&self) -> NormalizedParams {
        NormalizedParams {
            contention: self.contention,
            stability: self.stability,
        }
    }

    /// θ·r^α, the threshold in units of received interference power.
    pub fn theta_r(&self, theta: Threshold) -> f64 {
        theta.get() * self.link_distance.powf(self.path_loss_exp)
    }
}

/// The closed forms depend on (λ, r, α) only through Δ and δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedParams {
    contention: f64,
    stability: f64,
}

impl NormalizedParams {
    pub fn new(contention: f64, stability: f64) -> Result<Self> {
        if !(contention > 0.0 && contention.is_finite()) {
            return domain(format!("contention Δ must be positive, got {contention}"));
        }
        if !(stability > 0.0 && stability < 1.0) {
            return domain(format!("δ must lie in (0, 1), got {stability}"));
        }
        Ok(Self {
            contention,
            stability,
        })
    }

    pub fn contention(&self) -> f64 {
        self.contention
    }

    pub fn stability(&self) -> f64 {
        self.stability
    }

    /// Canonical physical model with r = 1 and λ = Δ/(πΓ(1+δ)Γ(1−δ)).
    pub fn to_model(&self) -> ModelParams {
        let intensity = self.contention / (PI * gamma_reflection_product(self.stability));
        let alpha = 2.0 / self.stability;
        let mut model = ModelParams::new(intensity, 1.0, alpha)
            .expect("normalized parameters map to a valid model");
        // keep Δ, δ bit-identical to the normalized values
        model.stability = self.stability;
        model.contention = self.contention;
        model
    }

    /// Δθ^δ, the exponent of the single-antenna success probability.
    pub fn load(&self, theta: Threshold) -> f64 {
        self.contention * theta.get().powf(self.stability)
    }
}

/// SIR threshold θ ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Threshold(f64);

impl Threshold {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta >= 0.0 && theta.is_finite()) {
            return domain(format!("SIR threshold must be finite and nonnegative, got {theta}"));
        }
        Ok(Self(theta))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Γ(1+δ)Γ(1−δ) for δ in (0, 1).
pub(crate) fn gamma_reflection_product(stability: f64) -> f64 {
    (ln_gamma_pos(1.0 + stability) + ln_gamma_pos(1.0 - stability)).exp()
}
