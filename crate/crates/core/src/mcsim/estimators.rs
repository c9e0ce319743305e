use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::farfield::far_field_log_factor;
use super::sampling::{realization_rng, sample_in_disk, sir_with_background, PathGain, PointSampler};
use super::{Method, SimConfig};
use crate::analytic::{ModelParams, Threshold};
use crate::error::{Error, Result};
use crate::specfun::DiversityOrder;

/// Bootstrap resamples for the correlation standard error.
pub const BOOTSTRAP_RESAMPLES: usize = 200;

const BOOTSTRAP_KEY: u64 = 0xb007_57a9_c0de_5eed;

/// Sample mean with its standard error (sample standard deviation / √count).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub count: usize,
}

impl Estimate {
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let std_error = if n > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            std_error,
            count: n,
        }
    }

    /// (mean − reference) / std_error; 0 when both agree exactly.
    pub fn z_score(&self, reference: f64) -> f64 {
        let diff = self.mean - reference;
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }
}

/// Maps `f` over 0..n in parallel, preserving order. The result does not
/// depend on the number of workers.
pub(crate) fn par_indexed<T, F>(workers: Option<usize>, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let run = || (0..n as u64).into_par_iter().map(&f).collect::<Vec<T>>();
    match workers {
        None => Ok(run()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("cannot start {w} workers: {e}")))?;
            Ok(pool.install(run))
        }
    }
}

fn sampling_radius(cfg: &SimConfig, thetas: &[Threshold]) -> f64 {
    let max_theta_r = cfg
        .theta_rs()
        .into_iter()
        .chain(thetas.iter().map(|&t| cfg.model.theta_r(t)))
        .fold(0.0, f64::max);
    cfg.radius_for(max_theta_r)
}

/// Per-realization log q(Φ) for a set of thresholds, with the fading
/// integrated out. Supports every product-form and union estimand without
/// resampling.
#[derive(Debug, Clone)]
pub struct ConditionedSamples {
    model: ModelParams,
    radius: f64,
    compensate: bool,
    seed: u64,
    workers: Option<usize>,
    theta_rs: Vec<f64>,
    log_q: Vec<f64>,
    point_counts: Vec<usize>,
}

impl ConditionedSamples {
    pub fn generate(cfg: &SimConfig, thetas: &[Threshold]) -> Result<Self> {
        cfg.validate()?;
        if thetas.is_empty() {
            return Err(Error::InvalidConfig("no thresholds requested".into()));
        }
        let radius = sampling_radius(cfg, thetas);
        let theta_rs: Vec<f64> = thetas.iter().map(|&t| cfg.model.theta_r(t)).collect();
        let sampler = PointSampler::new(&cfg.model, radius);
        let path = PathGain::new(&cfg.model);
        let j = theta_rs.len();
        let rows = par_indexed(cfg.workers, cfg.num_realizations, |i| {
            let mut rng = realization_rng(cfg.seed, i);
            let count = sampler.count(&mut rng);
            let mut acc = vec![0.0; j];
            for _ in 0..count {
                let gain = path.at_squared(sampler.squared_distance(&mut rng));
                for (a, t) in acc.iter_mut().zip(&theta_rs) {
                    *a -= (t * gain).ln_1p();
                }
            }
            (count, acc)
        })?;
        let mut log_q = Vec::with_capacity(rows.len() * j);
        let mut point_counts = Vec::with_capacity(rows.len());
        for (c, row) in rows {
            point_counts.push(c);
            log_q.extend(row);
        }
        Ok(Self {
            model: cfg.model,
            radius,
            compensate: cfg.tail_compensation,
            seed: cfg.seed,
            workers: cfg.workers,
            theta_rs,
            log_q,
            point_counts,
        })
    }

    pub fn len(&self) -> usize {
        self.point_counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.point_counts.is_empty()
    }

    pub fn disk_radius(&self) -> f64 {
        self.radius
    }

    pub fn point_count(&self, realization: usize) -> usize {
        self.point_counts[realization]
    }

    /// ln q(Φ) of a realization for threshold index `j`.
    pub fn log_q(&self, realization: usize, j: usize) -> f64 {
        self.log_q[realization * self.theta_rs.len() + j]
    }

    fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.log_q.iter().skip(j).step_by(self.theta_rs.len()).copied()
    }

    /// Log of the exact correction for interferers beyond the disk.
    fn far(&self, weights: &[(f64, f64)]) -> f64 {
        if self.compensate {
            far_field_log_factor(&self.model, self.radius, weights)
        } else {
            0.0
        }
    }

    /// Mean and variance of the far-field factor ∏_{‖x‖>R} (1 + θ_r‖x‖^{−α})^{−1}.
    /// Estimands that are not products of it are corrected to second order;
    /// the factor concentrates as the disk grows, so the residual is small.
    fn far_moments(&self, j: usize) -> (f64, f64) {
        if !self.compensate {
            return (1.0, 0.0);
        }
        let t = self.theta_rs[j];
        let l1 = self.far(&[(t, 1.0)]);
        let l2 = self.far(&[(t, 2.0)]);
        let m = l1.exp();
        (m, (m * m * (l2 - 2.0 * l1).exp_m1()).max(0.0))
    }

    /// Mean of q(Φ)^n: every antenna succeeds.
    pub fn joint_success(&self, j: usize, n: usize) -> Estimate {
        let nf = n as f64;
        let f = self.far(&[(self.theta_rs[j], nf)]);
        let vals: Vec<f64> = self.column(j).map(|lq| (nf * lq + f).exp()).collect();
        Estimate::from_samples(&vals)
    }

    /// Mean of 1 − (1 − q(Φ))^n: at least one antenna succeeds.
    pub fn selection_combining(&self, j: usize, n: usize) -> Estimate {
        if n == 1 {
            return self.joint_success(j, 1);
        }
        let nf = n as f64;
        let (m, v) = self.far_moments(j);
        let vals: Vec<f64> = self
            .column(j)
            .map(|lq| {
                let q = lq.exp();
                let miss = (-q * m).ln_1p();
                let curv = nf * (nf - 1.0) * pow_miss(miss, n - 2) * q * q;
                (-(nf * miss).exp_m1() - 0.5 * curv * v).clamp(0.0, 1.0)
            })
            .collect();
        Estimate::from_samples(&vals)
    }

    /// Mean of q₁(Φ)q₂(Φ) for two thresholds.
    pub fn two_antenna(&self, j1: usize, j2: usize) -> Estimate {
        let f = self.far(&[(self.theta_rs[j1], 1.0), (self.theta_rs[j2], 1.0)]);
        let vals: Vec<f64> = self
            .column(j1)
            .zip(self.column(j2))
            .map(|(a, b)| (a + b + f).exp())
            .collect();
        Estimate::from_samples(&vals)
    }

    /// ζ̂ = (Ê[q²] − Ê[q]²)/(Ê[q](1 − Ê[q])) with a bootstrap standard error.
    pub fn indicator_correlation(&self, j: usize) -> Result<Estimate> {
        let t = self.theta_rs[j];
        let f1 = self.far(&[(t, 1.0)]).exp();
        let f2 = self.far(&[(t, 2.0)]).exp();
        let triples: Vec<[f64; 3]> = self
            .column(j)
            .map(|lq| {
                let q = lq.exp();
                [q * f1, q * q * f2, 0.0]
            })
            .collect();
        let stat = |m: [f64; 3]| (m[1] - m[0] * m[0]) / (m[0] * (1.0 - m[0]));
        let m = means(&triples);
        if !(m[0] > 0.0 && m[0] < 1.0) {
            return Err(Error::DegenerateVariance(m[0]));
        }
        let se = bootstrap_se(&triples, self.seed, self.workers, stat)?;
        Ok(Estimate {
            mean: stat(m),
            std_error: se,
            count: triples.len(),
        })
    }

    /// Ê[(1 − q(Φ))^k] for k = 0..=k_max.
    pub fn first_success_tail(&self, j: usize, k_max: usize) -> Vec<Estimate> {
        let (m, v) = self.far_moments(j);
        let rows: Vec<(f64, f64)> = self
            .column(j)
            .map(|lq| {
                let q = lq.exp();
                ((-q * m).ln_1p(), q * q)
            })
            .collect();
        (0..=k_max)
            .map(|k| {
                if k == 0 {
                    return Estimate {
                        mean: 1.0,
                        std_error: 0.0,
                        count: rows.len(),
                    };
                }
                let kf = k as f64;
                let vals: Vec<f64> = rows
                    .iter()
                    .map(|&(miss, q2)| {
                        let curv = kf * (kf - 1.0) * pow_miss(miss, k.saturating_sub(2)) * q2;
                        (pow_miss(miss, k) + 0.5 * curv * v).clamp(0.0, 1.0)
                    })
                    .collect();
                Estimate::from_samples(&vals)
            })
            .collect()
    }
}

/// Per-realization SIR at every antenna.
#[derive(Debug, Clone)]
pub struct NaiveSamples {
    n_antennas: usize,
    seed: u64,
    workers: Option<usize>,
    radius: f64,
    sir: Vec<f64>,
}

impl NaiveSamples {
    pub fn generate(cfg: &SimConfig, thetas: &[Threshold]) -> Result<Self> {
        cfg.validate()?;
        let radius = sampling_radius(cfg, thetas);
        // interferers beyond the disk enter through their mean power
        let background = if cfg.tail_compensation {
            let a = cfg.model.path_loss_exp();
            cfg.model.intensity() * 2.0 * std::f64::consts::PI * radius.powf(2.0 - a) / (a - 2.0)
        } else {
            0.0
        };
        let rows = par_indexed(cfg.workers, cfg.num_realizations, |i| {
            let mut rng = realization_rng(cfg.seed, i);
            let real = sample_in_disk(&cfg.model, radius, cfg.n_antennas, &mut rng);
            sir_with_background(&real, &cfg.model, background)
        })?;
        Ok(Self {
            n_antennas: cfg.n_antennas,
            seed: cfg.seed,
            workers: cfg.workers,
            radius,
            sir: rows.into_iter().flatten().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.sir.len() / self.n_antennas
    }

    pub fn is_empty(&self) -> bool {
        self.sir.is_empty()
    }

    pub fn disk_radius(&self) -> f64 {
        self.radius
    }

    pub fn sir(&self, realization: usize) -> &[f64] {
        &self.sir[realization * self.n_antennas..(realization + 1) * self.n_antennas]
    }

    fn need(&self, n: usize) -> Result<()> {
        if n > self.n_antennas {
            return Err(Error::InsufficientAntennas {
                requested: n,
                available: self.n_antennas,
            });
        }
        Ok(())
    }

    fn indicator_mean(&self, pred: impl Fn(&[f64]) -> bool) -> Estimate {
        let vals: Vec<f64> = self
            .sir
            .chunks(self.n_antennas)
            .map(|s| if pred(s) { 1.0 } else { 0.0 })
            .collect();
        Estimate::from_samples(&vals)
    }

    pub fn joint_success(&self, n: usize, theta: Threshold) -> Result<Estimate> {
        self.need(n)?;
        let t = theta.get();
        Ok(self.indicator_mean(|s| s[..n].iter().all(|&v| v > t)))
    }

    pub fn selection_combining(&self, n: usize, theta: Threshold) -> Result<Estimate> {
        self.need(n)?;
        let t = theta.get();
        Ok(self.indicator_mean(|s| s[..n].iter().any(|&v| v > t)))
    }

    pub fn two_antenna(&self, theta1: Threshold, theta2: Threshold) -> Result<Estimate> {
        self.need(2)?;
        let (t1, t2) = (theta1.get(), theta2.get());
        Ok(self.indicator_mean(|s| s[0] > t1 && s[1] > t2))
    }

    /// Pearson correlation of the success indicators at antennas 1 and 2.
    pub fn indicator_correlation(&self, theta: Threshold) -> Result<Estimate> {
        self.need(2)?;
        let t = theta.get();
        let triples: Vec<[f64; 3]> = self
            .sir
            .chunks(self.n_antennas)
            .map(|s| {
                let a = if s[0] > t { 1.0 } else { 0.0 };
                let b = if s[1] > t { 1.0 } else { 0.0 };
                [a, b, a * b]
            })
            .collect();
        let stat = |m: [f64; 3]| {
            (m[2] - m[0] * m[1]) / (m[0] * (1.0 - m[0]) * m[1] * (1.0 - m[1])).sqrt()
        };
        let m = means(&triples);
        for p in [m[0], m[1]] {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::DegenerateVariance(p));
            }
        }
        let se = bootstrap_se(&triples, self.seed, self.workers, stat)?;
        Ok(Estimate {
            mean: stat(m),
            std_error: se,
            count: triples.len(),
        })
    }
}

/// (1 − u)^k from ln(1 − u), with (1 − u)^0 = 1 even at u = 1.
fn pow_miss(log_miss: f64, k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        (k as f64 * log_miss).exp()
    }
}

fn means(rows: &[[f64; 3]]) -> [f64; 3] {
    let mut s = [0.0; 3];
    for r in rows {
        for k in 0..3 {
            s[k] += r[k];
        }
    }
    let n = rows.len() as f64;
    [s[0] / n, s[1] / n, s[2] / n]
}

/// Standard deviation of `stat` over resampled column means.
fn bootstrap_se(
    rows: &[[f64; 3]],
    seed: u64,
    workers: Option<usize>,
    stat: impl Fn([f64; 3]) -> f64 + Sync + Send,
) -> Result<f64> {
    let n = rows.len();
    let stats = par_indexed(workers, BOOTSTRAP_RESAMPLES, |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ BOOTSTRAP_KEY);
        rng.set_stream(b);
        let mut s = [0.0; 3];
        for _ in 0..n {
            let r = &rows[rng.random_range(0..n)];
            for k in 0..3 {
                s[k] += r[k];
            }
        }
        let nf = n as f64;
        stat([s[0] / nf, s[1] / nf, s[2] / nf])
    })?;
    let finite: Vec<f64> = stats.into_iter().filter(|v| v.is_finite()).collect();
    if finite.len() < 2 {
        return Ok(f64::NAN);
    }
    let m = finite.iter().sum::<f64>() / finite.len() as f64;
    let ss: f64 = finite.iter().map(|v| (v - m) * (v - m)).sum();
    Ok((ss / (finite.len() - 1) as f64).sqrt())
}

/// P(SIR > θ at each of the first n antennas).
pub fn estimate_joint_success(
    cfg: &SimConfig,
    n: DiversityOrder,
    theta: Threshold,
    method: Method,
) -> Result<Estimate> {
    match method {
        Method::Conditioned => Ok(ConditionedSamples::generate(cfg, &[theta])?.joint_success(0, n.get())),
        Method::Naive => {
            check_antennas(cfg, n.get())?;
            NaiveSamples::generate(cfg, &[theta])?.joint_success(n.get(), theta)
        }
    }
}

/// P(SIR > θ at one or more of the first n antennas).
pub fn estimate_selection_combining(
    cfg: &SimConfig,
    n: DiversityOrder,
    theta: Threshold,
    method: Method,
) -> Result<Estimate> {
    match method {
        Method::Conditioned => {
            Ok(ConditionedSamples::generate(cfg, &[theta])?.selection_combining(0, n.get()))
        }
        Method::Naive => {
            check_antennas(cfg, n.get())?;
            NaiveSamples::generate(cfg, &[theta])?.selection_combining(n.get(), theta)
        }
    }
}

/// Correlation coefficient of the success events at two antennas.
pub fn estimate_indicator_correlation(
    cfg: &SimConfig,
    theta: Threshold,
    method: Method,
) -> Result<Estimate> {
    match method {
        Method::Conditioned => ConditionedSamples::generate(cfg, &[theta])?.indicator_correlation(0),
        Method::Naive => {
            check_antennas(cfg, 2)?;
            NaiveSamples::generate(cfg, &[theta])?.indicator_correlation(theta)
        }
    }
}

/// P(SIR₁ > θ₁, SIR₂ > θ₂).
pub fn estimate_two_antenna_joint(
    cfg: &SimConfig,
    theta1: Threshold,
    theta2: Threshold,
    method: Method,
) -> Result<Estimate> {
    match method {
        Method::Conditioned => {
            Ok(ConditionedSamples::generate(cfg, &[theta1, theta2])?.two_antenna(0, 1))
        }
        Method::Naive => {
            check_antennas(cfg, 2)?;
            NaiveSamples::generate(cfg, &[theta1, theta2])?.two_antenna(theta1, theta2)
        }
    }
}

/// P(N(θ) > k) for k = 0..=k_max, where N(θ) is the index of the first
/// antenna whose SIR exceeds θ.
pub fn estimate_first_success_tail(
    cfg: &SimConfig,
    theta: Threshold,
    k_max: usize,
) -> Result<Vec<Estimate>> {
    if k_max == 0 {
        return Err(Error::InvalidConfig("k_max must be at least 1".into()));
    }
    Ok(ConditionedSamples::generate(cfg, &[theta])?.first_success_tail(0, k_max))
}

fn check_antennas(cfg: &SimConfig, n: usize) -> Result<()> {
    if n > cfg.n_antennas {
        return Err(Error::InsufficientAntennas {
            requested: n,
            available: cfg.n_antennas,
        });
    }
    Ok(())
}
