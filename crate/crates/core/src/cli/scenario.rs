//! Flat `key = value` scenario files for `simulate` and `compare`.
//!
//! ```text
//! # comment
//! Delta = 0.25        # or lambda, r, alpha
//! delta = 0.5
//! theta = 1
//! n = 1, 2, 4
//! quantities = joint_success, selection_combining
//! realizations = 100000
//! seed = 42
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::eval::format_value;
use super::runs::{Draws, SimSettings};
use super::table::format_number;
use super::CliError;
use crate::analytic::{self, ModelParams, NormalizedParams, Threshold};
use crate::mcsim::{Estimate, Method};
use crate::specfun::DiversityOrder;

/// Estimands a scenario can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    JointSuccess,
    SelectionCombining,
    IndicatorCorrelation,
    TwoAntennaJoint,
    FirstSuccessTail,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::JointSuccess,
        Quantity::SelectionCombining,
        Quantity::IndicatorCorrelation,
        Quantity::TwoAntennaJoint,
        Quantity::FirstSuccessTail,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::JointSuccess => "joint_success",
            Quantity::SelectionCombining => "selection_combining",
            Quantity::IndicatorCorrelation => "indicator_correlation",
            Quantity::TwoAntennaJoint => "two_antenna_joint",
            Quantity::FirstSuccessTail => "first_success_tail",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.name() == s)
    }
}

/// A parsed scenario with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub model: ModelParams,
    pub thetas: Vec<f64>,
    pub thetas2: Vec<f64>,
    pub orders: Vec<usize>,
    pub quantities: Vec<Quantity>,
    pub settings: SimSettings,
}

const KNOWN_KEYS: &[&str] = &[
    "Delta",
    "delta",
    "lambda",
    "r",
    "alpha",
    "theta",
    "theta2",
    "n",
    "quantities",
    "realizations",
    "seed",
    "bias_budget",
    "method",
];

struct Entry {
    line: usize,
    value: String,
}

fn parse_err(line: usize, field: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

impl Scenario {
    /// Parses scenario text. `overrides` (from command-line flags) take
    /// precedence over the file.
    pub fn parse(text: &str, overrides: &ScenarioOverrides) -> Result<Self, CliError> {
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (k, v) = content
                .split_once('=')
                .ok_or_else(|| parse_err(line, content, "expected `key = value`"))?;
            let key = k.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(parse_err(
                    line,
                    key,
                    format!("unknown key (known keys: {})", KNOWN_KEYS.join(", ")),
                ));
            }
            if let Some(prev) = entries.get(key) {
                return Err(parse_err(line, key, format!("duplicate key, first set on line {}", prev.line)));
            }
            entries.insert(
                key.to_string(),
                Entry {
                    line,
                    value: v.trim().to_string(),
                },
            );
        }

        let num = |key: &str| -> Result<Option<f64>, CliError> {
            entries
                .get(key)
                .map(|e| {
                    e.value
                        .parse::<f64>()
                        .map_err(|_| parse_err(e.line, key, format!("`{}` is not a number", e.value)))
                })
                .transpose()
        };
        let list = |key: &str| -> Result<Option<Vec<f64>>, CliError> {
            entries
                .get(key)
                .map(|e| {
                    if e.value.is_empty() {
                        return Ok(Vec::new());
                    }
                    e.value
                        .split(',')
                        .map(|s| {
                            s.trim()
                                .parse::<f64>()
                                .map_err(|_| parse_err(e.line, key, format!("`{}` is not a number", s.trim())))
                        })
                        .collect()
                })
                .transpose()
        };
        let line_of = |key: &str| entries.get(key).map(|e| e.line).unwrap_or(0);

        let normalized = entries.contains_key("Delta") || entries.contains_key("delta");
        let physical = ["lambda", "r", "alpha"].iter().any(|k| entries.contains_key(*k));
        let model = match (normalized, physical) {
            (true, true) => {
                return Err(parse_err(
                    line_of("lambda").max(line_of("alpha")).max(line_of("r")),
                    "lambda",
                    "give either Delta and delta or lambda, r and alpha",
                ))
            }
            (true, false) => {
                let c = num("Delta")?.ok_or_else(|| parse_err(0, "Delta", "missing"))?;
                let d = num("delta")?.ok_or_else(|| parse_err(0, "delta", "missing"))?;
                NormalizedParams::new(c, d)
                    .map_err(|e| parse_err(line_of("Delta").max(line_of("delta")), "Delta", e.to_string()))?
                    .to_model()
            }
            (false, true) => {
                let get = |k: &str| num(k)?.ok_or_else(|| parse_err(0, k, "missing"));
                ModelParams::new(get("lambda")?, get("r")?, get("alpha")?)
                    .map_err(|e| parse_err(line_of("alpha"), "alpha", e.to_string()))?
            }
            (false, false) => {
                return Err(parse_err(0, "Delta", "missing model: give Delta and delta, or lambda, r and alpha"))
            }
        };

        let thetas = list("theta")?.unwrap_or_else(|| vec![1.0]);
        if thetas.is_empty() || thetas.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(parse_err(line_of("theta"), "theta", "thresholds must be a nonempty list of positive numbers"));
        }
        let thetas2 = list("theta2")?.unwrap_or_else(|| thetas.clone());
        if thetas2.is_empty() || thetas2.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(parse_err(line_of("theta2"), "theta2", "thresholds must be a nonempty list of positive numbers"));
        }

        let orders_raw = list("n")?.ok_or_else(|| parse_err(0, "n", "missing list of antenna counts"))?;
        if orders_raw.is_empty() {
            return Err(CliError::Usage(format!(
                "line {}: n: the list of antenna counts is empty",
                line_of("n")
            )));
        }
        let mut orders = Vec::new();
        for v in orders_raw {
            if v.fract() != 0.0 || v < 1.0 {
                return Err(parse_err(line_of("n"), "n", format!("{v} is not a positive integer")));
            }
            orders.push(v as usize);
        }

        let quantities = match entries.get("quantities") {
            None => vec![Quantity::JointSuccess],
            Some(e) => e
                .value
                .split(',')
                .map(|s| {
                    Quantity::parse(s.trim()).ok_or_else(|| {
                        let names: Vec<&str> = Quantity::ALL.iter().map(|q| q.name()).collect();
                        parse_err(e.line, "quantities", format!("unknown quantity `{}` (known: {})", s.trim(), names.join(", ")))
                    })
                })
                .collect::<Result<_, _>>()?,
        };

        let mut settings = SimSettings::default();
        if let Some(e) = entries.get("realizations") {
            settings.realizations = e
                .value
                .parse()
                .ok()
                .filter(|n| *n >= 1)
                .ok_or_else(|| parse_err(e.line, "realizations", "expected a positive integer"))?;
        }
        if let Some(e) = entries.get("seed") {
            settings.seed = e
                .value
                .parse()
                .map_err(|_| parse_err(e.line, "seed", "expected an unsigned 64-bit integer"))?;
        }
        if let Some(b) = num("bias_budget")? {
            if !(b > 0.0) {
                return Err(parse_err(line_of("bias_budget"), "bias_budget", "must be positive"));
            }
            settings.bias_budget = b;
        }
        if let Some(e) = entries.get("method") {
            settings.method = e
                .value
                .parse::<Method>()
                .map_err(|err| parse_err(e.line, "method", err.to_string()))?;
        }
        overrides.apply_to(&mut settings);

        Ok(Self {
            model,
            thetas,
            thetas2,
            orders,
            quantities,
            settings,
        })
    }

    /// Settings that determine the output, for the run manifest.
    pub fn resolved(&self) -> BTreeMap<String, String> {
        let join = |v: &[f64]| v.iter().map(|x| format_number(*x)).collect::<Vec<_>>().join(",");
        let mut m = BTreeMap::new();
        m.insert("lambda".into(), format_number(self.model.intensity()));
        m.insert("r".into(), format_number(self.model.link_distance()));
        m.insert("alpha".into(), format_number(self.model.path_loss_exp()));
        m.insert("Delta".into(), format_number(self.model.contention()));
        m.insert("delta".into(), format_number(self.model.stability()));
        m.insert("theta".into(), join(&self.thetas));
        m.insert("theta2".into(), join(&self.thetas2));
        m.insert(
            "n".into(),
            self.orders.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
        );
        m.insert(
            "quantities".into(),
            self.quantities.iter().map(|q| q.name()).collect::<Vec<_>>().join(","),
        );
        m.insert("realizations".into(), self.settings.realizations.to_string());
        m.insert("seed".into(), self.settings.seed.to_string());
        m.insert("bias_budget".into(), format_number(self.settings.bias_budget));
        m.insert("method".into(), self.settings.method.to_string());
        let cfg = self.sim_config();
        m.insert("disk_radius".into(), format_number(cfg.resolved_disk_radius()));
        m.insert("truncation_bias_bound".into(), format_number(cfg.truncation_bias_bound()));
        m.insert("tail_compensation".into(), cfg.tail_compensation.to_string());
        m
    }

    fn all_thresholds(&self) -> Vec<f64> {
        let mut all = self.thetas.clone();
        if self.quantities.contains(&Quantity::TwoAntennaJoint) {
            for t in &self.thetas2 {
                if !all.contains(t) {
                    all.push(*t);
                }
            }
        }
        all
    }

    fn sim_config(&self) -> crate::mcsim::SimConfig {
        let mut n_ant = self.orders.iter().copied().max().unwrap_or(1);
        if self
            .quantities
            .iter()
            .any(|q| matches!(q, Quantity::IndicatorCorrelation | Quantity::TwoAntennaJoint))
        {
            n_ant = n_ant.max(2);
        }
        self.settings.config(self.model, n_ant, self.all_thresholds())
    }

    /// Runs the simulation; one row per (quantity, n, θ[, θ₂]).
    pub fn simulate(&self) -> Result<Vec<Row>, CliError> {
        let cfg = self.sim_config();
        let thetas: Vec<Threshold> = self
            .all_thresholds()
            .into_iter()
            .map(Threshold::new)
            .collect::<Result<_, _>>()?;
        let draws = Draws::generate(&cfg, &thetas, self.settings.method)?;
        let np = self.model.normalized();
        let mut rows = Vec::new();
        for &q in &self.quantities {
            for &t in &self.thetas {
                let theta = Threshold::new(t)?;
                match q {
                    Quantity::JointSuccess | Quantity::SelectionCombining | Quantity::FirstSuccessTail => {
                        for &n in &self.orders {
                            let k = DiversityOrder::new(n)?;
                            let (analytic, est) = match q {
                                Quantity::JointSuccess => (
                                    analytic::joint_success_prob(&np, k, theta),
                                    draws.joint(n, theta)?,
                                ),
                                Quantity::SelectionCombining => (
                                    analytic::selection_combining_prob(&np, k, theta)?,
                                    draws.selection(n, theta)?,
                                ),
                                _ => (
                                    1.0 - analytic::selection_combining_prob(&np, k, theta)?,
                                    draws.first_success_tail(n, theta)?,
                                ),
                            };
                            rows.push(Row::new(q, n, t, None, analytic, est));
                        }
                    }
                    Quantity::IndicatorCorrelation => {
                        let est = draws.correlation(theta)?;
                        rows.push(Row::new(q, 2, t, None, analytic::indicator_correlation(&np, theta), est));
                    }
                    Quantity::TwoAntennaJoint => {
                        for &t2 in &self.thetas2 {
                            let theta2 = Threshold::new(t2)?;
                            let est = draws.two_antenna(theta, theta2)?;
                            let a = analytic::joint_two_antenna_success(&np, theta, theta2);
                            rows.push(Row::new(q, 2, t, Some(t2), a, est));
                        }
                    }
                }
            }
        }
        Ok(rows)
    }
}

/// Command-line values that replace scenario entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioOverrides {
    pub realizations: Option<usize>,
    pub seed: Option<u64>,
    pub bias_budget: Option<f64>,
    pub method: Option<Method>,
    pub workers: Option<usize>,
}

/// One estimand with its closed-form value.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub quantity: Quantity,
    pub n: usize,
    pub theta: f64,
    pub theta2: Option<f64>,
    pub analytic: f64,
    pub estimate: Estimate,
}

impl Row {
    fn new(quantity: Quantity, n: usize, theta: f64, theta2: Option<f64>, analytic: f64, estimate: Estimate) -> Self {
        Self {
            quantity,
            n,
            theta,
            theta2,
            analytic,
            estimate,
        }
    }

    pub fn z(&self) -> f64 {
        self.estimate.z_score(self.analytic)
    }
}

fn theta2_field(r: &Row) -> String {
    r.theta2.map(format_number).unwrap_or_default()
}

/// `simulate` output: estimates only.
pub fn simulation_csv(rows: &[Row]) -> String {
    let mut s = String::from("quantity,n,theta,theta2,estimate,std_error,count\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.quantity.name(),
            r.n,
            format_number(r.theta),
            theta2_field(r),
            format_number(r.estimate.mean),
            format_number(r.estimate.std_error),
            r.estimate.count
        );
    }
    s
}

/// `compare` output: closed form, estimate, standard error and z-score.
pub fn comparison_csv(rows: &[Row]) -> String {
    let mut s = String::from("quantity,n,theta,theta2,analytic,estimate,std_error,z\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.quantity.name(),
            r.n,
            format_number(r.theta),
            theta2_field(r),
            format_number(r.analytic),
            format_number(r.estimate.mean),
            format_number(r.estimate.std_error),
            format_value(r.z())
        );
    }
    s
}

/// Largest |z| allowed by `compare` before it reports failure.
pub const Z_LIMIT: f64 = 4.0;

pub fn all_within_limit(rows: &[Row]) -> bool {
    rows.iter().all(|r| r.z().abs() <= Z_LIMIT)
}
