//! Python bindings: `import sirdiv`.

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::sirdiv::analytic::{self, Threshold};
use ::sirdiv::cli;
use ::sirdiv::mcsim::{self, Method};
use ::sirdiv::specfun::{self, DiversityOrder};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn order(n: usize) -> PyResult<DiversityOrder> {
    DiversityOrder::new(n).map_err(err)
}

fn threshold(t: f64) -> PyResult<Threshold> {
    Threshold::new(t).map_err(err)
}

fn method(name: &str) -> PyResult<Method> {
    name.parse().map_err(err)
}

/// Physical parameters: intensity λ, link distance r, path-loss exponent α.
#[pyclass(name = "ModelParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyModelParams(analytic::ModelParams);

#[pymethods]
impl PyModelParams {
    #[new]
    fn new(intensity: f64, link_distance: f64, path_loss_exp: f64) -> PyResult<Self> {
        analytic::ModelParams::new(intensity, link_distance, path_loss_exp)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn intensity(&self) -> f64 {
        self.0.intensity()
    }

    #[getter]
    fn link_distance(&self) -> f64 {
        self.0.link_distance()
    }

    #[getter]
    fn path_loss_exp(&self) -> f64 {
        self.0.path_loss_exp()
    }

    #[getter]
    fn stability(&self) -> f64 {
        self.0.stability()
    }

    #[getter]
    fn contention(&self) -> f64 {
        self.0.contention()
    }

    fn normalized(&self) -> PyNormalizedParams {
        PyNormalizedParams(self.0.normalized())
    }

    fn __repr__(&self) -> String {
        format!(
            "ModelParams(intensity={}, link_distance={}, path_loss_exp={})",
            self.0.intensity(),
            self.0.link_distance(),
            self.0.path_loss_exp()
        )
    }
}

/// Contention Δ and stability exponent δ = 2/α.
#[pyclass(name = "NormalizedParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyNormalizedParams(analytic::NormalizedParams);

#[pymethods]
impl PyNormalizedParams {
    #[new]
    fn new(contention: f64, stability: f64) -> PyResult<Self> {
        analytic::NormalizedParams::new(contention, stability)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn contention(&self) -> f64 {
        self.0.contention()
    }

    #[getter]
    fn stability(&self) -> f64 {
        self.0.stability()
    }

    /// Physical parameters with r = 1.
    fn to_model(&self) -> PyModelParams {
        PyModelParams(self.0.to_model())
    }

    fn __repr__(&self) -> String {
        format!(
            "NormalizedParams(contention={}, stability={})",
            self.0.contention(),
            self.0.stability()
        )
    }
}

#[pyclass(name = "Estimate", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyEstimate(mcsim::Estimate);

#[pymethods]
impl PyEstimate {
    #[getter]
    fn mean(&self) -> f64 {
        self.0.mean
    }

    #[getter]
    fn std_error(&self) -> f64 {
        self.0.std_error
    }

    #[getter]
    fn count(&self) -> usize {
        self.0.count
    }

    fn z_score(&self, reference: f64) -> f64 {
        self.0.z_score(reference)
    }

    fn __repr__(&self) -> String {
        format!(
            "Estimate(mean={}, std_error={}, count={})",
            self.0.mean, self.0.std_error, self.0.count
        )
    }
}

/// Simulation settings.
#[pyclass(name = "SimConfig", frozen, from_py_object)]
#[derive(Clone)]
struct PySimConfig(mcsim::SimConfig);

#[pymethods]
impl PySimConfig {
    #[new]
    #[pyo3(signature = (model, n_antennas, thresholds, realizations=mcsim::SimConfig::DEFAULT_REALIZATIONS, seed=mcsim::SimConfig::DEFAULT_SEED, bias_budget=mcsim::SimConfig::DEFAULT_BIAS_BUDGET, disk_radius=None, workers=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        model: PyModelParams,
        n_antennas: usize,
        thresholds: Vec<f64>,
        realizations: usize,
        seed: u64,
        bias_budget: f64,
        disk_radius: Option<f64>,
        workers: Option<usize>,
    ) -> PyResult<Self> {
        let mut cfg = mcsim::SimConfig::new(model.0, n_antennas, thresholds)
            .with_realizations(realizations)
            .with_seed(seed)
            .with_bias_budget(bias_budget);
        if let Some(r) = disk_radius {
            cfg = cfg.with_disk_radius(r);
        }
        cfg.workers = workers;
        cfg.validate().map_err(err)?;
        Ok(Self(cfg))
    }

    #[getter]
    fn disk_radius(&self) -> f64 {
        self.0.resolved_disk_radius()
    }

    #[getter]
    fn mean_point_count(&self) -> f64 {
        self.0.mean_point_count()
    }

    #[getter]
    fn truncation_bias_bound(&self) -> f64 {
        self.0.truncation_bias_bound()
    }
}

#[pyfunction]
fn log_gamma(x: f64) -> PyResult<f64> {
    specfun::log_gamma(x).map_err(err)
}

#[pyfunction]
fn beta(x: f64, y: f64) -> PyResult<f64> {
    specfun::beta(x, y).map_err(err)
}

#[pyfunction]
fn diversity_poly(n: usize, x: f64) -> PyResult<f64> {
    specfun::diversity_poly(order(n)?, x).map_err(err)
}

/// Exact coefficients of D_n as (numerator, denominator) pairs, lowest degree first.
#[pyfunction]
fn diversity_poly_coefficients(n: usize) -> PyResult<Vec<(BigUint, BigUint)>> {
    let c = specfun::diversity_poly_coefficients(order(n)?).map_err(err)?;
    Ok((0..=c.degree()).filter_map(|k| c.exact(k)).collect())
}

#[pyfunction]
fn diversity_loss(n: usize, stability: f64) -> PyResult<f64> {
    analytic::diversity_loss(order(n)?, stability).map_err(err)
}

#[pyfunction]
fn single_success_prob(p: PyNormalizedParams, theta: f64) -> PyResult<f64> {
    Ok(analytic::single_success_prob(&p.0, threshold(theta)?))
}

#[pyfunction]
fn joint_success_prob(p: PyNormalizedParams, n: usize, theta: f64) -> PyResult<f64> {
    Ok(analytic::joint_success_prob(&p.0, order(n)?, threshold(theta)?))
}

#[pyfunction]
fn independent_joint_prob(p: PyNormalizedParams, n: usize, theta: f64) -> PyResult<f64> {
    Ok(analytic::independent_joint_prob(&p.0, order(n)?, threshold(theta)?))
}

/// (lower, upper) bounds on the joint success probability.
#[pyfunction]
fn joint_prob_bounds(p: PyNormalizedParams, n: usize, theta: f64) -> PyResult<(f64, f64)> {
    let b = analytic::joint_prob_bounds(&p.0, order(n)?, threshold(theta)?);
    Ok((b.lower, b.upper))
}

#[pyfunction]
fn conditional_success_prob(p: PyNormalizedParams, k: usize, theta: f64) -> PyResult<f64> {
    Ok(analytic::conditional_success_prob(&p.0, order(k)?, threshold(theta)?))
}

#[pyfunction]
fn indicator_correlation(p: PyNormalizedParams, theta: f64) -> PyResult<f64> {
    Ok(analytic::indicator_correlation(&p.0, threshold(theta)?))
}

#[pyfunction]
fn selection_combining_prob(p: PyNormalizedParams, n: usize, theta: f64) -> PyResult<f64> {
    analytic::selection_combining_prob(&p.0, order(n)?, threshold(theta)?).map_err(err)
}

#[pyfunction]
fn selection_combining_curve(p: PyNormalizedParams, n_max: usize, theta: f64) -> PyResult<Vec<f64>> {
    analytic::selection_combining_curve(&p.0, order(n_max)?, threshold(theta)?).map_err(err)
}

#[pyfunction]
fn independent_selection_prob(p: PyNormalizedParams, n: usize, theta: f64) -> PyResult<f64> {
    Ok(analytic::independent_selection_prob(&p.0, order(n)?, threshold(theta)?))
}

#[pyfunction]
fn joint_two_antenna_success(p: PyNormalizedParams, theta1: f64, theta2: f64) -> PyResult<f64> {
    Ok(analytic::joint_two_antenna_success(&p.0, threshold(theta1)?, threshold(theta2)?))
}

#[pyfunction]
fn joint_two_antenna_cdf(p: PyNormalizedParams, theta1: f64, theta2: f64) -> PyResult<f64> {
    Ok(analytic::joint_two_antenna_cdf(&p.0, threshold(theta1)?, threshold(theta2)?))
}

#[pyfunction]
fn required_disk_radius(model: PyModelParams, bias_budget: f64, theta_r: f64) -> f64 {
    mcsim::required_disk_radius(&model.0, bias_budget, theta_r)
}

#[pyfunction]
#[pyo3(signature = (cfg, n, theta, method="conditioned"))]
fn estimate_joint_success(py: Python<'_>, cfg: PySimConfig, n: usize, theta: f64, method: &str) -> PyResult<PyEstimate> {
    let (n, theta, m) = (order(n)?, threshold(theta)?, self::method(method)?);
    py.detach(|| mcsim::estimate_joint_success(&cfg.0, n, theta, m))
        .map(PyEstimate)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (cfg, n, theta, method="conditioned"))]
fn estimate_selection_combining(
    py: Python<'_>,
    cfg: PySimConfig,
    n: usize,
    theta: f64,
    method: &str,
) -> PyResult<PyEstimate> {
    let (n, theta, m) = (order(n)?, threshold(theta)?, self::method(method)?);
    py.detach(|| mcsim::estimate_selection_combining(&cfg.0, n, theta, m))
        .map(PyEstimate)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (cfg, theta, method="conditioned"))]
fn estimate_indicator_correlation(py: Python<'_>, cfg: PySimConfig, theta: f64, method: &str) -> PyResult<PyEstimate> {
    let (theta, m) = (threshold(theta)?, self::method(method)?);
    py.detach(|| mcsim::estimate_indicator_correlation(&cfg.0, theta, m))
        .map(PyEstimate)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (cfg, theta1, theta2, method="conditioned"))]
fn estimate_two_antenna_joint(
    py: Python<'_>,
    cfg: PySimConfig,
    theta1: f64,
    theta2: f64,
    method: &str,
) -> PyResult<PyEstimate> {
    let (t1, t2, m) = (threshold(theta1)?, threshold(theta2)?, self::method(method)?);
    py.detach(|| mcsim::estimate_two_antenna_joint(&cfg.0, t1, t2, m))
        .map(PyEstimate)
        .map_err(err)
}

#[pyfunction]
fn estimate_first_success_tail(py: Python<'_>, cfg: PySimConfig, theta: f64, k_max: usize) -> PyResult<Vec<PyEstimate>> {
    let theta = threshold(theta)?;
    py.detach(|| mcsim::estimate_first_success_tail(&cfg.0, theta, k_max))
        .map(|v| v.into_iter().map(PyEstimate).collect())
        .map_err(err)
}

/// Text the `eval` subcommand would print.
#[pyfunction]
fn eval(quantity: &str, params: Vec<String>) -> PyResult<String> {
    cli::cmd_eval(quantity, &params).map(|o| o.render()).map_err(err)
}

/// CSV data of figure 1 to 5; `overrides` replaces default figure parameters.
#[pyfunction]
#[pyo3(signature = (figure, overrides=Vec::new()))]
fn figure_csv(py: Python<'_>, figure: u8, overrides: Vec<(String, String)>) -> PyResult<String> {
    let mut opts = cli::FigOptions::new(figure);
    opts.overrides = overrides;
    py.detach(|| cli::cmd_fig(&opts))
        .map(|(t, _)| t.to_csv())
        .map_err(err)
}

#[pymodule]
#[pyo3(name = "sirdiv")]
fn sirdiv_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyModelParams>()?;
    m.add_class::<PyNormalizedParams>()?;
    m.add_class::<PyEstimate>()?;
    m.add_class::<PySimConfig>()?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(beta, m)?)?;
    m.add_function(wrap_pyfunction!(diversity_poly, m)?)?;
    m.add_function(wrap_pyfunction!(diversity_poly_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(diversity_loss, m)?)?;
    m.add_function(wrap_pyfunction!(single_success_prob, m)?)?;
    m.add_function(wrap_pyfunction!(joint_success_prob, m)?)?;
    m.add_function(wrap_pyfunction!(independent_joint_prob, m)?)?;
    m.add_function(wrap_pyfunction!(joint_prob_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(conditional_success_prob, m)?)?;
    m.add_function(wrap_pyfunction!(indicator_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(selection_combining_prob, m)?)?;
    m.add_function(wrap_pyfunction!(selection_combining_curve, m)?)?;
    m.add_function(wrap_pyfunction!(independent_selection_prob, m)?)?;
    m.add_function(wrap_pyfunction!(joint_two_antenna_success, m)?)?;
    m.add_function(wrap_pyfunction!(joint_two_antenna_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(required_disk_radius, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_joint_success, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_selection_combining, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_indicator_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_two_antenna_joint, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_first_success_tail, m)?)?;
    m.add_function(wrap_pyfunction!(eval, m)?)?;
    m.add_function(wrap_pyfunction!(figure_csv, m)?)?;
    Ok(())
}
