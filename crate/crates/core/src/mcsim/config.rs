use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::analytic::ModelParams;
use crate::error::{Error, Result};

/// Simulation setup for the truncated Poisson model.
///
/// The sampling window is a disk of radius R around the receiver. When
/// `disk_radius` is `None`, R is the smallest radius meeting
/// `truncation_bias_budget` (see [`required_disk_radius`]), capped so the
/// expected number of interferers does not exceed `max_mean_points`. The
/// interference from outside the disk is restored exactly for product-form
/// estimands when `tail_compensation` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub model: ModelParams,
    pub n_antennas: usize,
    pub thresholds: Vec<f64>,
    pub num_realizations: usize,
    pub seed: u64,
    pub truncation_bias_budget: f64,
    pub disk_radius: Option<f64>,
    pub max_mean_points: f64,
    pub tail_compensation: bool,
    /// Worker threads; `None` uses the global pool. Results do not depend on it.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl SimConfig {
    pub const DEFAULT_REALIZATIONS: usize = 100_000;
    pub const DEFAULT_SEED: u64 = 42;
    pub const DEFAULT_BIAS_BUDGET: f64 = 1e-4;
    pub const DEFAULT_MAX_MEAN_POINTS: f64 = 2048.0;

    pub fn new(model: ModelParams, n_antennas: usize, thresholds: Vec<f64>) -> Self {
        Self {
            model,
            n_antennas,
            thresholds,
            num_realizations: Self::DEFAULT_REALIZATIONS,
            seed: Self::DEFAULT_SEED,
            truncation_bias_budget: Self::DEFAULT_BIAS_BUDGET,
            disk_radius: None,
            max_mean_points: Self::DEFAULT_MAX_MEAN_POINTS,
            tail_compensation: true,
            workers: None,
        }
    }

    pub fn with_realizations(mut self, n: usize) -> Self {
        self.num_realizations = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_bias_budget(mut self, budget: f64) -> Self {
        self.truncation_bias_budget = budget;
        self
    }

    pub fn with_disk_radius(mut self, radius: f64) -> Self {
        self.disk_radius = Some(radius);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_antennas == 0 {
            return bad("n_antennas must be at least 1".into());
        }
        if self.thresholds.is_empty() {
            return bad("at least one threshold is required".into());
        }
        if let Some(t) = self.thresholds.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return bad(format!("thresholds must be positive, got {t}"));
        }
        if self.num_realizations == 0 {
            return bad("num_realizations must be at least 1".into());
        }
        if !(self.truncation_bias_budget > 0.0) {
            return bad(format!(
                "truncation bias budget must be positive, got {}",
                self.truncation_bias_budget
            ));
        }
        if let Some(r) = self.disk_radius {
            if !(r > self.model.link_distance() && r.is_finite()) {
                return bad(format!(
                    "disk radius {r} must exceed the link distance {}",
                    self.model.link_distance()
                ));
            }
        }
        if !(self.max_mean_points > 0.0) {
            return bad(format!(
                "max_mean_points must be positive, got {}",
                self.max_mean_points
            ));
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        Ok(())
    }

    /// θ·r^α for every configured threshold.
    pub fn theta_rs(&self) -> Vec<f64> {
        self.thresholds
            .iter()
            .map(|&t| t * self.model.link_distance().powf(self.model.path_loss_exp()))
            .collect()
    }

    /// Sampling radius for the configured thresholds.
    pub fn resolved_disk_radius(&self) -> f64 {
        let max_theta_r = self.theta_rs().into_iter().fold(0.0, f64::max);
        self.radius_for(max_theta_r)
    }

    pub(crate) fn radius_for(&self, max_theta_r: f64) -> f64 {
        if let Some(r) = self.disk_radius {
            return r;
        }
        let wanted = required_disk_radius(&self.model, self.truncation_bias_budget, max_theta_r);
        let floor = 10.0 * self.model.link_distance();
        let cap = (self.max_mean_points / (PI * self.model.intensity())).sqrt();
        wanted.min(cap.max(floor))
    }

    /// Expected number of interferers in the sampling disk.
    pub fn mean_point_count(&self) -> f64 {
        let r = self.resolved_disk_radius();
        self.model.intensity() * PI * r * r
    }

    /// First-order bound on the probability shift from ignoring interferers
    /// outside the sampling disk, for the largest configured threshold.
    pub fn truncation_bias_bound(&self) -> f64 {
        let max_theta_r = self.theta_rs().into_iter().fold(0.0, f64::max);
        tail_interference_bound(&self.model, self.resolved_disk_radius(), max_theta_r)
    }
}

fn tail_interference_bound(model: &ModelParams, radius: f64, theta_r: f64) -> f64 {
    let a = model.path_loss_exp();
    model.intensity() * 2.0 * PI * radius.powf(2.0 - a) / (a - 2.0) * theta_r
}

/// Smallest R ≥ 10r with θ_r·λ·2π·R^{2−α}/(α−2) ≤ `bias_budget`.
pub fn required_disk_radius(model: &ModelParams, bias_budget: f64, theta_r: f64) -> f64 {
    let a = model.path_loss_exp();
    let floor = 10.0 * model.link_distance();
    if !(theta_r > 0.0) || bias_budget.is_infinite() {
        return floor;
    }
    let r = (model.intensity() * 2.0 * PI * theta_r / ((a - 2.0) * bias_budget)).powf(1.0 / (a - 2.0));
    r.max(floor)
}

/// Estimator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Indicator of the event on sampled fading.
    Naive,
    /// Fading integrated out given the point pattern.
    Conditioned,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Naive => "naive",
            Method::Conditioned => "conditioned",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Method::Naive),
            "conditioned" => Ok(Method::Conditioned),
            other => Err(Error::InvalidConfig(format!(
                "unknown method `{other}` (expected naive or conditioned)"
            ))),
        }
    }
}
