use super::CliError;
use crate::analytic::{ModelParams, Threshold};
use crate::mcsim::{ConditionedSamples, Estimate, Method, NaiveSamples, SimConfig};

/// Simulation settings shared by `fig --sim`, `simulate` and `compare`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSettings {
    pub realizations: usize,
    pub seed: u64,
    pub bias_budget: f64,
    pub method: Method,
    pub workers: Option<usize>,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            realizations: SimConfig::DEFAULT_REALIZATIONS,
            seed: SimConfig::DEFAULT_SEED,
            bias_budget: SimConfig::DEFAULT_BIAS_BUDGET,
            method: Method::Conditioned,
            workers: None,
        }
    }
}

impl SimSettings {
    pub fn config(&self, model: ModelParams, n_antennas: usize, thresholds: Vec<f64>) -> SimConfig {
        let mut cfg = SimConfig::new(model, n_antennas, thresholds)
            .with_realizations(self.realizations)
            .with_seed(self.seed)
            .with_bias_budget(self.bias_budget);
        cfg.workers = self.workers;
        cfg
    }
}

/// One batch of realizations under either estimator family.
pub(crate) enum Draws {
    Conditioned(ConditionedSamples, Vec<Threshold>),
    Naive(NaiveSamples),
}

impl Draws {
    pub(crate) fn generate(cfg: &SimConfig, thetas: &[Threshold], method: Method) -> Result<Self, CliError> {
        Ok(match method {
            Method::Conditioned => Draws::Conditioned(ConditionedSamples::generate(cfg, thetas)?, thetas.to_vec()),
            Method::Naive => Draws::Naive(NaiveSamples::generate(cfg, thetas)?),
        })
    }

    fn index(thetas: &[Threshold], theta: Threshold) -> usize {
        thetas
            .iter()
            .position(|t| *t == theta)
            .expect("threshold was sampled")
    }

    pub(crate) fn joint(&self, n: usize, theta: Threshold) -> Result<Estimate, CliError> {
        Ok(match self {
            Draws::Conditioned(s, ts) => s.joint_success(Self::index(ts, theta), n),
            Draws::Naive(s) => s.joint_success(n, theta)?,
        })
    }

    pub(crate) fn selection(&self, n: usize, theta: Threshold) -> Result<Estimate, CliError> {
        Ok(match self {
            Draws::Conditioned(s, ts) => s.selection_combining(Self::index(ts, theta), n),
            Draws::Naive(s) => s.selection_combining(n, theta)?,
        })
    }

    pub(crate) fn correlation(&self, theta: Threshold) -> Result<Estimate, CliError> {
        Ok(match self {
            Draws::Conditioned(s, ts) => s.indicator_correlation(Self::index(ts, theta))?,
            Draws::Naive(s) => s.indicator_correlation(theta)?,
        })
    }

    pub(crate) fn two_antenna(&self, t1: Threshold, t2: Threshold) -> Result<Estimate, CliError> {
        Ok(match self {
            Draws::Conditioned(s, ts) => s.two_antenna(Self::index(ts, t1), Self::index(ts, t2)),
            Draws::Naive(s) => s.two_antenna(t1, t2)?,
        })
    }

    /// P(N > k): no antenna among the first k succeeds.
    pub(crate) fn first_success_tail(&self, k: usize, theta: Threshold) -> Result<Estimate, CliError> {
        match self {
            Draws::Conditioned(s, ts) => Ok(s.first_success_tail(Self::index(ts, theta), k)[k]),
            Draws::Naive(s) => {
                if k == 0 {
                    return Ok(Estimate {
                        mean: 1.0,
                        std_error: 0.0,
                        count: s.len(),
                    });
                }
                let e = s.selection_combining(k, theta)?;
                Ok(Estimate {
                    mean: 1.0 - e.mean,
                    ..e
                })
            }
        }
    }
}
