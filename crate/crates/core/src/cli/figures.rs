use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::runs::{Draws, SimSettings};
use super::table::{format_number, CurveTable};
use super::CliError;
use crate::analytic::{self, ModelParams, NormalizedParams, Threshold};
use crate::specfun::{self, DiversityOrder};

/// Options of the `fig` subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct FigOptions {
    pub figure: u8,
    pub sim: bool,
    pub settings: SimSettings,
    /// `key=value` replacements of the default figure parameters.
    pub overrides: Vec<(String, String)>,
}

impl FigOptions {
    pub fn new(figure: u8) -> Self {
        Self {
            figure,
            sim: false,
            settings: SimSettings::default(),
            overrides: Vec::new(),
        }
    }
}

/// Default parameters of each figure, in output order.
pub fn default_params(figure: u8) -> Result<Vec<(&'static str, &'static str)>, CliError> {
    Ok(match figure {
        1 => vec![("n_values", "1,2,4,8"), ("points", "101")],
        2 => vec![("Delta", "0.25"), ("delta", "0.5"), ("theta", "1"), ("n_max", "25")],
        3 => vec![
            ("theta", "1"),
            ("Delta_values", "0.1,1,10"),
            ("delta_min", "0.01"),
            ("delta_max", "0.99"),
            ("points", "99"),
        ],
        4 => vec![
            ("theta", "1"),
            ("lambda_pi_r2", "0.3333333333333333"),
            ("n_values", "2,4,16"),
            ("alpha_min", "2.1"),
            ("alpha_max", "8"),
            ("points", "61"),
        ],
        5 => vec![("load", "0.5"), ("delta", "0.5"), ("n_max", "128")],
        other => {
            return Err(CliError::Usage(format!(
                "figure must be 1, 2, 3, 4 or 5, got {other}"
            )))
        }
    })
}

struct Params {
    values: Vec<(String, String)>,
}

impl Params {
    fn resolve(figure: u8, overrides: &[(String, String)]) -> Result<Self, CliError> {
        let mut values: Vec<(String, String)> = default_params(figure)?
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        for (k, v) in overrides {
            match values.iter().position(|(key, _)| key == k) {
                Some(i) => values[i].1 = v.clone(),
                None => {
                    let keys: Vec<&str> = values.iter().map(|(k, _)| k.as_str()).collect();
                    return Err(CliError::Usage(format!(
                        "figure {figure} has no parameter `{k}` (parameters: {})",
                        keys.join(", ")
                    )));
                }
            }
        }
        Ok(Self { values })
    }

    fn raw(&self, key: &str) -> &str {
        &self
            .values
            .iter()
            .find(|(k, _)| k == key)
            .expect("parameter has a default")
            .1
    }

    fn f64(&self, key: &str) -> Result<f64, CliError> {
        let v = self.raw(key);
        v.trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("parameter {key}: `{v}` is not a number")))
    }

    fn usize(&self, key: &str) -> Result<usize, CliError> {
        let v = self.raw(key);
        v.trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("parameter {key}: `{v}` is not a positive integer")))
    }

    fn list(&self, key: &str) -> Vec<String> {
        self.raw(key).split(',').map(|s| s.trim().to_string()).collect()
    }

    fn f64_list(&self, key: &str) -> Result<Vec<(String, f64)>, CliError> {
        self.list(key)
            .into_iter()
            .map(|s| {
                let v = s
                    .parse()
                    .map_err(|_| CliError::Usage(format!("parameter {key}: `{s}` is not a number")))?;
                Ok((s, v))
            })
            .collect()
    }

    fn order_list(&self, key: &str) -> Result<Vec<usize>, CliError> {
        self.list(key)
            .into_iter()
            .map(|s| match s.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(CliError::Usage(format!(
                    "parameter {key}: `{s}` is not a positive integer"
                ))),
            })
            .collect()
    }
}

fn order(n: usize) -> Result<DiversityOrder, CliError> {
    Ok(DiversityOrder::new(n)?)
}

fn threshold(t: f64) -> Result<Threshold, CliError> {
    Ok(Threshold::new(t)?)
}

/// `points` values from `lo` to `hi` inclusive, the last one exactly `hi`.
fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if points < 2 || !(hi > lo) {
        return Err(CliError::Usage(format!(
            "grid needs at least two points and lo < hi (got {points} points on [{lo}, {hi}])"
        )));
    }
    Ok((0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (points - 1) as f64
            }
        })
        .collect())
}

/// Builds the table for a figure and the settings that determine it.
pub fn cmd_fig(opts: &FigOptions) -> Result<(CurveTable, BTreeMap<String, String>), CliError> {
    let params = Params::resolve(opts.figure, &opts.overrides)?;
    let mut table = match opts.figure {
        1 => figure1(&params, opts)?,
        2 => figure2(&params, opts)?,
        3 => figure3(&params, opts)?,
        4 => figure4(&params, opts)?,
        5 => figure5(&params, opts)?,
        _ => unreachable!("figure validated by default_params"),
    };
    let mut resolved = BTreeMap::new();
    resolved.insert("figure".to_string(), opts.figure.to_string());
    for (k, v) in &params.values {
        table.param(k, v);
        resolved.insert(format!("param.{k}"), v.clone());
    }
    resolved.insert("sim".to_string(), opts.sim.to_string());
    if opts.sim {
        let s = &opts.settings;
        for (k, v) in [
            ("realizations", s.realizations.to_string()),
            ("seed", s.seed.to_string()),
            ("bias_budget", format_number(s.bias_budget)),
            ("method", s.method.to_string()),
        ] {
            table.param(k, &v);
            resolved.insert(k.to_string(), v);
        }
    }
    let overridden: Vec<String> = opts.overrides.iter().map(|(k, v)| format!("{k}={v}")).collect();
    resolved.insert("overrides".to_string(), overridden.join(";"));
    Ok((table, resolved))
}

fn figure1(p: &Params, opts: &FigOptions) -> Result<CurveTable, CliError> {
    if opts.sim {
        return Err(CliError::Usage(
            "figure 1 shows deterministic functions only; --sim does not apply".into(),
        ));
    }
    let ns = p.order_list("n_values")?;
    let xs = grid(0.0, 1.0, p.usize("points")?)?;
    let mut labels = Vec::new();
    for n in &ns {
        labels.extend([format!("D_{n}"), format!("lower_{n}"), format!("upper_{n}")]);
    }
    let mut t = CurveTable::new(
        "Diversity polynomial D_n(x) with lower bound n^x and upper bound n^x/Gamma(1+x)",
        "x",
        labels,
    );
    for &x in &xs {
        let gamma = specfun::log_gamma(1.0 + x)?.exp();
        let mut row = Vec::new();
        for &n in &ns {
            let lower = (n as f64).powf(x);
            row.extend([specfun::diversity_poly(order(n)?, x)?, lower, lower / gamma]);
        }
        t.push_row(x, row)?;
    }
    Ok(t)
}

fn figure2(p: &Params, opts: &FigOptions) -> Result<CurveTable, CliError> {
    let np = NormalizedParams::new(p.f64("Delta")?, p.f64("delta")?)?;
    let theta = threshold(p.f64("theta")?)?;
    let n_max = p.usize("n_max")?;
    order(n_max)?;
    let mut t = CurveTable::new(
        "Joint success probability P_n versus number of antennas, with bounds and the independent-interference value",
        "n",
        vec!["P_n".into(), "lower".into(), "upper".into(), "independent".into()],
    );
    for n in 1..=n_max {
        let k = order(n)?;
        let b = analytic::joint_prob_bounds(&np, k, theta);
        t.push_row(
            n as f64,
            vec![
                analytic::joint_success_prob(&np, k, theta),
                b.lower,
                b.upper,
                analytic::independent_joint_prob(&np, k, theta),
            ],
        )?;
    }
    if opts.sim {
        let cfg = opts.settings.config(np.to_model(), n_max, vec![theta.get()]);
        let draws = Draws::generate(&cfg, &[theta], opts.settings.method)?;
        let mut est = Vec::new();
        for n in 1..=n_max {
            est.push(draws.joint(n, theta)?);
        }
        t.add_series("P_n_mc", est.iter().map(|e| e.mean).collect())?;
        t.add_series("P_n_mc_se", est.iter().map(|e| e.std_error).collect())?;
    }
    Ok(t)
}

fn figure3(p: &Params, opts: &FigOptions) -> Result<CurveTable, CliError> {
    let theta = threshold(p.f64("theta")?)?;
    let contentions = p.f64_list("Delta_values")?;
    let deltas = grid(p.f64("delta_min")?, p.f64("delta_max")?, p.usize("points")?)?;
    let labels = contentions.iter().map(|(s, _)| format!("zeta_Delta{s}")).collect();
    let mut t = CurveTable::new(
        "Correlation coefficient of the success events at two antennas versus delta",
        "delta",
        labels,
    );
    for &d in &deltas {
        let mut row = Vec::new();
        for (_, c) in &contentions {
            row.push(analytic::indicator_correlation(&NormalizedParams::new(*c, d)?, theta));
        }
        t.push_row(d, row)?;
    }
    if opts.sim {
        for (s, c) in &contentions {
            let mut mean = Vec::new();
            let mut se = Vec::new();
            for &d in &deltas {
                let model = NormalizedParams::new(*c, d)?.to_model();
                let cfg = opts.settings.config(model, 2, vec![theta.get()]);
                let e = Draws::generate(&cfg, &[theta], opts.settings.method)?.correlation(theta)?;
                mean.push(e.mean);
                se.push(e.std_error);
            }
            t.add_series(&format!("zeta_Delta{s}_mc"), mean)?;
            t.add_series(&format!("zeta_Delta{s}_mc_se"), se)?;
        }
    }
    Ok(t)
}

fn figure4(p: &Params, opts: &FigOptions) -> Result<CurveTable, CliError> {
    let theta = threshold(p.f64("theta")?)?;
    let density = p.f64("lambda_pi_r2")?;
    let ns = p.order_list("n_values")?;
    let alphas = grid(p.f64("alpha_min")?, p.f64("alpha_max")?, p.usize("points")?)?;
    let mut labels = vec!["Delta".to_string(), "delta".to_string()];
    for n in &ns {
        labels.extend([format!("outage_n{n}"), format!("outage_indep_n{n}")]);
    }
    let mut t = CurveTable::new(
        "Outage 1 - p_n with selection combining versus path-loss exponent, correlated and independent interference",
        "alpha",
        labels,
    );
    let model_at = |a: f64| ModelParams::new(density / PI, 1.0, a);
    for &a in &alphas {
        let np = model_at(a)?.normalized();
        let mut row = vec![np.contention(), np.stability()];
        for &n in &ns {
            let k = order(n)?;
            row.push(1.0 - analytic::selection_combining_prob(&np, k, theta)?);
            row.push(1.0 - analytic::independent_selection_prob(&np, k, theta));
        }
        t.push_row(a, row)?;
    }
    if opts.sim {
        let n_ant = ns.iter().copied().max().unwrap_or(1);
        let mut cols: Vec<(Vec<f64>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); ns.len()];
        for &a in &alphas {
            let cfg = opts.settings.config(model_at(a)?, n_ant, vec![theta.get()]);
            let draws = Draws::generate(&cfg, &[theta], opts.settings.method)?;
            for (col, &n) in cols.iter_mut().zip(&ns) {
                let e = draws.selection(n, theta)?;
                col.0.push(1.0 - e.mean);
                col.1.push(e.std_error);
            }
        }
        for ((mean, se), n) in cols.into_iter().zip(&ns) {
            t.add_series(&format!("outage_n{n}_mc"), mean)?;
            t.add_series(&format!("outage_n{n}_mc_se"), se)?;
        }
    }
    Ok(t)
}

fn figure5(p: &Params, opts: &FigOptions) -> Result<CurveTable, CliError> {
    // θ = 1, so Δ equals the load Δθ^δ
    let np = NormalizedParams::new(p.f64("load")?, p.f64("delta")?)?;
    let theta = threshold(1.0)?;
    let n_max = p.usize("n_max")?;
    let curve = analytic::selection_combining_curve(&np, order(n_max)?, theta)?;
    let mut t = CurveTable::new(
        "Selection combining success probability p_n versus number of antennas, correlated and independent interference",
        "n",
        vec!["log10_n".into(), "p_n".into(), "p_indep_n".into()],
    );
    for (i, p_n) in curve.iter().enumerate() {
        let n = i + 1;
        t.push_row(
            n as f64,
            vec![
                (n as f64).log10(),
                *p_n,
                analytic::independent_selection_prob(&np, order(n)?, theta),
            ],
        )?;
    }
    if opts.sim {
        let cfg = opts.settings.config(np.to_model(), n_max, vec![theta.get()]);
        let draws = Draws::generate(&cfg, &[theta], opts.settings.method)?;
        let mut est = Vec::new();
        for n in 1..=n_max {
            est.push(draws.selection(n, theta)?);
        }
        t.add_series("p_n_mc", est.iter().map(|e| e.mean).collect())?;
        t.add_series("p_n_mc_se", est.iter().map(|e| e.std_error).collect())?;
    }
    Ok(t)
}
