use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::SimConfig;
use crate::analytic::{ModelParams, Threshold};

/// Generator for realization `index` of a run seeded with `seed`.
pub fn realization_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One draw of the interferer pattern inside the disk and all fading gains.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub points: Vec<[f64; 2]>,
    /// Row-major |points| × n_antennas matrix of interferer fading h_{x,k}.
    pub fading: Vec<f64>,
    pub desired_fading: Vec<f64>,
    pub disk_radius: f64,
}

impl Realization {
    pub fn n_antennas(&self) -> usize {
        self.desired_fading.len()
    }

    pub fn fading_at(&self, point: usize, antenna: usize) -> f64 {
        self.fading[point * self.n_antennas() + antenna]
    }
}

/// q(Φ) for one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalSuccess {
    pub q: f64,
}

/// s ↦ s^{−α/2}, the path gain at squared distance s.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PathGain {
    half_alpha: f64,
    integer: Option<i32>,
}

impl PathGain {
    pub(crate) fn new(model: &ModelParams) -> Self {
        let half_alpha = 0.5 * model.path_loss_exp();
        let integer = (half_alpha.fract() == 0.0 && half_alpha <= 16.0).then_some(half_alpha as i32);
        Self { half_alpha, integer }
    }

    #[inline]
    pub(crate) fn at_squared(&self, s: f64) -> f64 {
        match self.integer {
            Some(k) => 1.0 / s.powi(k),
            None => s.powf(-self.half_alpha),
        }
    }
}

/// Point-count law for a disk of the given radius.
pub(crate) struct PointSampler {
    poisson: Option<Poisson<f64>>,
    radius: f64,
}

impl PointSampler {
    pub(crate) fn new(model: &ModelParams, radius: f64) -> Self {
        let mean = model.intensity() * PI * radius * radius;
        Self {
            poisson: Poisson::new(mean).ok(),
            radius,
        }
    }

    pub(crate) fn count<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.poisson {
            Some(p) => p.sample(rng) as usize,
            None => 0,
        }
    }

    /// Squared distance of a uniform point in the disk. Consumes the same
    /// draws as [`PointSampler::point`].
    pub(crate) fn squared_distance<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let _angle: f64 = rng.random();
        self.radius * self.radius * u
    }

    pub(crate) fn point<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 2] {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        let rho = self.radius * u.sqrt();
        let (s, c) = (2.0 * PI * v).sin_cos();
        [rho * c, rho * s]
    }
}

/// Exp(1) by inversion, strictly positive.
pub(crate) fn exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    -(1.0 - u).ln()
}

/// Draws point count, positions, desired fading, then the fading matrix.
pub fn sample_realization<R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Realization {
    let radius = cfg.resolved_disk_radius();
    sample_in_disk(&cfg.model, radius, cfg.n_antennas, rng)
}

pub(crate) fn sample_in_disk<R: Rng + ?Sized>(
    model: &ModelParams,
    radius: f64,
    n_antennas: usize,
    rng: &mut R,
) -> Realization {
    let sampler = PointSampler::new(model, radius);
    let count = sampler.count(rng);
    let points: Vec<[f64; 2]> = (0..count).map(|_| sampler.point(rng)).collect();
    let desired_fading = (0..n_antennas).map(|_| exponential(rng)).collect();
    let fading = (0..count * n_antennas).map(|_| exponential(rng)).collect();
    Realization {
        points,
        fading,
        desired_fading,
        disk_radius: radius,
    }
}

/// SIR_k = h_k r^{−α} / Σ_x h_{x,k}‖x‖^{−α}; +∞ without interferers.
pub fn sir_at_antennas(real: &Realization, model: &ModelParams) -> Vec<f64> {
    sir_with_background(real, model, 0.0)
}

/// SIR with a fixed interference power added at every antenna.
pub(crate) fn sir_with_background(
    real: &Realization,
    model: &ModelParams,
    background: f64,
) -> Vec<f64> {
    let a = model.path_loss_exp();
    let path = PathGain::new(model);
    let n = real.n_antennas();
    let mut interference = vec![background; n];
    for (i, p) in real.points.iter().enumerate() {
        let gain = path.at_squared(p[0] * p[0] + p[1] * p[1]);
        for (k, acc) in interference.iter_mut().enumerate() {
            *acc += real.fading[i * n + k] * gain;
        }
    }
    let signal = model.link_distance().powf(-a);
    real.desired_fading
        .iter()
        .zip(interference)
        .map(|(h, i)| if i == 0.0 { f64::INFINITY } else { h * signal / i })
        .collect()
}

/// q(Φ) = ∏_x (1 + θ_r‖x‖^{−α})^{−1}; ignores the fading entries.
pub fn conditional_success(
    real: &Realization,
    model: &ModelParams,
    theta: Threshold,
) -> ConditionalSuccess {
    let theta_r = model.theta_r(theta);
    let path = PathGain::new(model);
    let log_q: f64 = real
        .points
        .iter()
        .map(|p| -(theta_r * path.at_squared(p[0] * p[0] + p[1] * p[1])).ln_1p())
        .sum();
    ConditionalSuccess { q: log_q.exp() }
}
