use std::collections::BTreeMap;

use super::table::CurveTable;
use super::CliError;
use crate::analytic::{self, ModelParams, NormalizedParams, Threshold};
use crate::mcsim::required_disk_radius;
use crate::specfun::{self, DiversityOrder};

/// Names accepted by `eval`, with the parameters each one reads.
pub const QUANTITIES: &[(&str, &str)] = &[
    ("log_gamma", "x"),
    ("beta", "x y"),
    ("diversity_poly", "n x"),
    ("diversity_poly_derivative", "n x"),
    ("diversity_poly_bounds", "n x"),
    ("diversity_poly_coefficients", "n"),
    ("diversity_loss", "n δ|α"),
    ("contention", "λ r α"),
    ("required_disk_radius", "λ r α bias θ"),
    ("single_success_prob", "model θ"),
    ("joint_success_prob", "model n θ"),
    ("independent_joint_prob", "model n θ"),
    ("joint_prob_bounds", "model n θ"),
    ("conditional_success_prob", "model k θ"),
    ("indicator_correlation", "model θ"),
    ("selection_combining_prob", "model n θ"),
    ("independent_selection_prob", "model n θ"),
    ("joint_two_antenna_success", "model θ1 θ2"),
    ("joint_two_antenna_cdf", "model θ1 θ2"),
    ("independent_two_antenna_success", "model θ1 θ2"),
];

const KEYS: &[(&str, &[&str])] = &[
    ("Delta", &["Δ", "Delta"]),
    ("delta", &["δ", "delta"]),
    ("theta", &["θ", "theta"]),
    ("theta1", &["θ1", "θ₁", "theta1"]),
    ("theta2", &["θ2", "θ₂", "theta2"]),
    ("n", &["n"]),
    ("k", &["k"]),
    ("x", &["x"]),
    ("y", &["y"]),
    ("lambda", &["λ", "lambda"]),
    ("r", &["r"]),
    ("alpha", &["α", "alpha"]),
    ("bias", &["bias"]),
];

fn canonical_key(key: &str) -> Option<&'static str> {
    KEYS.iter()
        .find(|(_, aliases)| aliases.contains(&key))
        .map(|(k, _)| *k)
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Scalar(f64),
    Range { start: f64, end: f64, count: usize },
}

/// Result of an evaluation: named scalars, or a table when one parameter
/// was given as a range `start:end:count`.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalOutput {
    Scalars(Vec<(String, f64)>),
    Text(Vec<String>),
    Table(CurveTable),
}

impl EvalOutput {
    pub fn render(&self) -> String {
        match self {
            EvalOutput::Scalars(v) if v.len() == 1 => format!("{}\n", format_value(v[0].1)),
            EvalOutput::Scalars(v) => v
                .iter()
                .map(|(k, x)| format!("{k}={}\n", format_value(*x)))
                .collect(),
            EvalOutput::Text(lines) => lines.iter().map(|l| format!("{l}\n")).collect(),
            EvalOutput::Table(t) => t.to_csv(),
        }
    }
}

/// Twelve digits after the decimal point with trailing zeros removed, or
/// scientific notation with twelve significant digits outside [1e−4, 1e12).
pub fn format_value(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-4..1e12).contains(&a) {
        let s = format!("{v:.12}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" {
            "0".into()
        } else {
            s.to_string()
        }
    } else {
        let s = format!("{v:.11e}");
        let (mant, exp) = s.split_once('e').expect("scientific format");
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{exp}")
    }
}

fn parse_params(items: &[String]) -> Result<BTreeMap<&'static str, Value>, CliError> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("parameter `{item}` is not of the form key=value")))?;
        let key = canonical_key(k.trim())
            .ok_or_else(|| CliError::Usage(format!("unknown parameter `{k}`")))?;
        let bad = || CliError::Usage(format!("parameter {k}: cannot parse `{v}`"));
        let value = if v.contains(':') {
            let parts: Vec<&str> = v.split(':').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
            let end: f64 = parts[1].trim().parse().map_err(|_| bad())?;
            let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
            if count < 2 || !(end > start) {
                return Err(CliError::Usage(format!(
                    "parameter {k}: a range needs start < end and at least 2 points"
                )));
            }
            Value::Range { start, end, count }
        } else {
            Value::Scalar(v.trim().parse().map_err(|_| bad())?)
        };
        if out.insert(key, value).is_some() {
            return Err(CliError::Usage(format!("parameter {k} given twice")));
        }
    }
    Ok(out)
}

struct Args<'a> {
    values: &'a BTreeMap<&'static str, f64>,
    used: std::cell::RefCell<Vec<&'static str>>,
}

impl Args<'_> {
    fn has(&self, key: &'static str) -> bool {
        self.values.contains_key(key)
    }

    fn get(&self, key: &'static str) -> Result<f64, CliError> {
        self.used.borrow_mut().push(key);
        self.values
            .get(key)
            .copied()
            .ok_or_else(|| CliError::Usage(format!("missing parameter {key}")))
    }

    fn order(&self, key: &'static str) -> Result<DiversityOrder, CliError> {
        let v = self.get(key)?;
        if v.fract() != 0.0 || v < 1.0 || v > usize::MAX as f64 {
            return Err(CliError::Usage(format!("{key} must be a positive integer, got {v}")));
        }
        Ok(DiversityOrder::new(v as usize)?)
    }

    fn threshold(&self, key: &'static str) -> Result<Threshold, CliError> {
        Ok(Threshold::new(self.get(key)?)?)
    }

    fn physical(&self) -> Result<ModelParams, CliError> {
        Ok(ModelParams::new(self.get("lambda")?, self.get("r")?, self.get("alpha")?)?)
    }

    fn model(&self) -> Result<NormalizedParams, CliError> {
        let normalized = self.has("Delta") || self.has("delta");
        let physical = self.has("lambda") || self.has("r") || self.has("alpha");
        match (normalized, physical) {
            (true, true) => Err(CliError::Usage(
                "give either Δ and δ or λ, r and α, not both".into(),
            )),
            (false, true) => Ok(self.physical()?.normalized()),
            _ => Ok(NormalizedParams::new(self.get("Delta")?, self.get("delta")?)?),
        }
    }

    fn stability(&self) -> Result<f64, CliError> {
        if self.has("alpha") && !self.has("delta") {
            let a = self.get("alpha")?;
            if !(a > 2.0) {
                return Err(CliError::Usage(format!("α must exceed 2, got {a}")));
            }
            Ok(2.0 / a)
        } else {
            self.get("delta")
        }
    }

    fn check_all_used(&self) -> Result<(), CliError> {
        let used = self.used.borrow();
        for k in self.values.keys() {
            if !used.contains(k) {
                return Err(CliError::Usage(format!("parameter {k} is not used by this quantity")));
            }
        }
        Ok(())
    }
}

fn scalar(name: &str, v: f64) -> Vec<(String, f64)> {
    vec![(name.to_string(), v)]
}

fn evaluate_point(
    quantity: &str,
    values: &BTreeMap<&'static str, f64>,
) -> Result<EvalOutput, CliError> {
    let a = Args {
        values,
        used: Default::default(),
    };
    let out = match quantity {
        "log_gamma" => scalar(quantity, specfun::log_gamma(a.get("x")?)?),
        "beta" => scalar(quantity, specfun::beta(a.get("x")?, a.get("y")?)?),
        "diversity_poly" => scalar(quantity, specfun::diversity_poly(a.order("n")?, a.get("x")?)?),
        "diversity_poly_derivative" => scalar(
            quantity,
            specfun::diversity_poly_derivative(a.order("n")?, a.get("x")?)?,
        ),
        "diversity_poly_bounds" => {
            let b = specfun::diversity_poly_bounds(a.order("n")?, a.get("x")?)?;
            vec![
                ("lower".into(), b.lower),
                ("upper_asymptotic".into(), b.upper_asymptotic),
                ("upper_linear".into(), b.upper_linear),
            ]
        }
        "diversity_poly_coefficients" => {
            let c = specfun::diversity_poly_coefficients(a.order("n")?)?;
            a.check_all_used()?;
            let lines = (0..=c.degree())
                .map(|k| {
                    let (num, den) = c.exact(k).expect("index within degree");
                    format!("x^{k}: {num}/{den} = {}", format_value(c.coeffs()[k]))
                })
                .collect();
            return Ok(EvalOutput::Text(lines));
        }
        "diversity_loss" => scalar(quantity, analytic::diversity_loss(a.order("n")?, a.stability()?)?),
        "contention" => {
            let m = a.physical()?;
            vec![("Delta".into(), m.contention()), ("delta".into(), m.stability())]
        }
        "required_disk_radius" => {
            let m = a.physical()?;
            let bias = a.get("bias")?;
            if !(bias > 0.0) {
                return Err(CliError::Usage(format!("bias must be positive, got {bias}")));
            }
            let t = a.threshold("theta")?;
            scalar(quantity, required_disk_radius(&m, bias, m.theta_r(t)))
        }
        "single_success_prob" => scalar(quantity, analytic::single_success_prob(&a.model()?, a.threshold("theta")?)),
        "joint_success_prob" => scalar(
            quantity,
            analytic::joint_success_prob(&a.model()?, a.order("n")?, a.threshold("theta")?),
        ),
        "independent_joint_prob" => scalar(
            quantity,
            analytic::independent_joint_prob(&a.model()?, a.order("n")?, a.threshold("theta")?),
        ),
        "joint_prob_bounds" => {
            let b = analytic::joint_prob_bounds(&a.model()?, a.order("n")?, a.threshold("theta")?);
            vec![("lower".into(), b.lower), ("upper".into(), b.upper)]
        }
        "conditional_success_prob" => scalar(
            quantity,
            analytic::conditional_success_prob(&a.model()?, a.order("k")?, a.threshold("theta")?),
        ),
        "indicator_correlation" => scalar(
            quantity,
            analytic::indicator_correlation(&a.model()?, a.threshold("theta")?),
        ),
        "selection_combining_prob" => scalar(
            quantity,
            analytic::selection_combining_prob(&a.model()?, a.order("n")?, a.threshold("theta")?)?,
        ),
        "independent_selection_prob" => scalar(
            quantity,
            analytic::independent_selection_prob(&a.model()?, a.order("n")?, a.threshold("theta")?),
        ),
        "joint_two_antenna_success" => scalar(
            quantity,
            analytic::joint_two_antenna_success(&a.model()?, a.threshold("theta1")?, a.threshold("theta2")?),
        ),
        "joint_two_antenna_cdf" => scalar(
            quantity,
            analytic::joint_two_antenna_cdf(&a.model()?, a.threshold("theta1")?, a.threshold("theta2")?),
        ),
        "independent_two_antenna_success" => scalar(
            quantity,
            analytic::independent_two_antenna_success(
                &a.model()?,
                a.threshold("theta1")?,
                a.threshold("theta2")?,
            ),
        ),
        other => {
            let names: Vec<&str> = QUANTITIES.iter().map(|(n, _)| *n).collect();
            return Err(CliError::Usage(format!(
                "unknown quantity `{other}`; available: {}",
                names.join(", ")
            )));
        }
    };
    a.check_all_used()?;
    Ok(EvalOutput::Scalars(out))
}

/// Evaluates a registered quantity. At most one parameter may be a range,
/// in which case the output is a table over that parameter.
pub fn cmd_eval(quantity: &str, params: &[String]) -> Result<EvalOutput, CliError> {
    let parsed = parse_params(params)?;
    let ranges: Vec<&'static str> = parsed
        .iter()
        .filter(|(_, v)| matches!(v, Value::Range { .. }))
        .map(|(k, _)| *k)
        .collect();
    let mut point: BTreeMap<&'static str, f64> = parsed
        .iter()
        .filter_map(|(k, v)| match v {
            Value::Scalar(x) => Some((*k, *x)),
            Value::Range { .. } => None,
        })
        .collect();
    match ranges.as_slice() {
        [] => evaluate_point(quantity, &point),
        [key] => {
            let Value::Range { start, end, count } = parsed[key] else {
                unreachable!("filtered to ranges")
            };
            let mut table: Option<CurveTable> = None;
            for i in 0..count {
                let x = if i + 1 == count {
                    end
                } else {
                    start + (end - start) * i as f64 / (count - 1) as f64
                };
                point.insert(key, x);
                let values = match evaluate_point(quantity, &point)? {
                    EvalOutput::Scalars(v) => v,
                    _ => {
                        return Err(CliError::Usage(format!(
                            "{quantity} does not support a parameter range"
                        )))
                    }
                };
                let t = table.get_or_insert_with(|| {
                    let labels = values.iter().map(|(n, _)| n.clone()).collect();
                    let mut t = CurveTable::new(quantity, key, labels);
                    for (k, v) in &parsed {
                        if let Value::Scalar(s) = v {
                            t.param(k, super::table::format_number(*s));
                        }
                    }
                    t
                });
                t.push_row(x, values.into_iter().map(|(_, v)| v).collect())?;
            }
            Ok(EvalOutput::Table(table.expect("at least two points")))
        }
        _ => Err(CliError::Usage("at most one parameter may be a range".into())),
    }
}
