//! Python bindings: fading models, link configurations, the three metrics
//! and their Monte-Carlo estimators.

use foxsec::colluding::{CollusionConfig, Scheme};
use foxsec::config::{Metric, Scenario};
use foxsec::fading::{db_to_linear, FadingModel};
use foxsec::montecarlo::{self, McEstimate};
use foxsec::secrecy::{Method, WiretapConfig};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: foxsec::Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

#[pyclass(name = "FadingModel", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFadingModel(FadingModel);

#[pymethods]
impl PyFadingModel {
    /// alpha-mu fading with mean SNR in dB.
    #[staticmethod]
    fn alpha_mu(alpha: f64, mu: f64, mean_snr_db: f64) -> PyResult<Self> {
        checked(FadingModel::alpha_mu(alpha, mu, db_to_linear(mean_snr_db)))
    }

    #[staticmethod]
    fn fisher_f(m: f64, m_s: f64, mean_snr_db: f64) -> PyResult<Self> {
        checked(FadingModel::fisher_f(m, m_s, db_to_linear(mean_snr_db)))
    }

    #[staticmethod]
    fn egk(m: f64, m_s: f64, xi: f64, xi_s: f64, mean_snr_db: f64) -> PyResult<Self> {
        checked(FadingModel::egk(m, m_s, xi, xi_s, db_to_linear(mean_snr_db)))
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.0.family()
    }

    /// Mean SNR, linear.
    #[getter]
    fn mean_snr(&self) -> f64 {
        self.0.mean_snr()
    }

    fn pdf(&self, x: f64) -> PyResult<f64> {
        Ok(self.0.pdf(x).map_err(to_py)?.value)
    }

    fn cdf(&self, x: f64) -> PyResult<f64> {
        Ok(self.0.cdf(x).map_err(to_py)?.value)
    }

    fn sample(&self, seed: u64, count: usize) -> Vec<f64> {
        self.0.sample(seed, count)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

fn checked(m: FadingModel) -> PyResult<PyFadingModel> {
    m.validate().map_err(to_py)?;
    Ok(PyFadingModel(m))
}

/// One legitimate link against one eavesdropper.
#[pyclass(name = "WiretapConfig", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyWiretapConfig(WiretapConfig);

#[pymethods]
impl PyWiretapConfig {
    #[new]
    fn new(main: PyRef<'_, PyFadingModel>, eve: PyRef<'_, PyFadingModel>, target_rate: f64) -> PyResult<Self> {
        let c = WiretapConfig::new(main.0, eve.0, target_rate);
        c.validate().map_err(to_py)?;
        Ok(Self(c))
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// One legitimate link against colluding eavesdroppers.
#[pyclass(name = "CollusionConfig", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCollusionConfig(CollusionConfig);

#[pymethods]
impl PyCollusionConfig {
    /// `scheme` is "mrc" (sum of SNRs) or "sc" (largest SNR).
    #[new]
    fn new(
        main: PyRef<'_, PyFadingModel>,
        eves: Vec<PyRef<'_, PyFadingModel>>,
        scheme: &str,
        target_rate: f64,
    ) -> PyResult<Self> {
        let scheme = match scheme {
            "mrc" => Scheme::Mrc,
            "sc" => Scheme::Sc,
            _ => return Err(PyValueError::new_err(format!("unknown scheme {scheme:?} (mrc, sc)"))),
        };
        let c = CollusionConfig::new(main.0, eves.iter().map(|e| e.0).collect(), scheme, target_rate);
        c.validate().map_err(to_py)?;
        Ok(Self(c))
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

fn scenario(cfg: &Bound<'_, PyAny>) -> PyResult<Scenario> {
    if let Ok(c) = cfg.cast::<PyWiretapConfig>() {
        Ok(c.get().0.into())
    } else if let Ok(c) = cfg.cast::<PyCollusionConfig>() {
        Ok(c.get().0.clone().into())
    } else {
        Err(PyValueError::new_err("expected WiretapConfig or CollusionConfig"))
    }
}

/// Parses a JSON scenario (SNRs in dB) into a config object.
#[pyfunction]
fn from_json(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    Ok(match Scenario::from_json(text).map_err(to_py)? {
        Scenario::Single(c) => Py::new(py, PyWiretapConfig(c))?.into_any(),
        Scenario::Colluding(c) => Py::new(py, PyCollusionConfig(c))?.into_any(),
    })
}

/// `(value, error)` of `metric` ("sop", "pnz", "asc") by `method`.
#[pyfunction]
#[pyo3(signature = (cfg, metric, method = "exact", samples = 1_000_000, seed = 1))]
fn evaluate(
    py: Python<'_>,
    cfg: &Bound<'_, PyAny>,
    metric: &str,
    method: &str,
    samples: usize,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let s = scenario(cfg)?;
    let metric: Metric = metric.parse().map_err(to_py)?;
    let method: Method = method.parse().map_err(to_py)?;
    foxsec::config::check_method(&s, metric, method).map_err(to_py)?;
    let r = py
        .detach(|| foxsec::cli::evaluate(&s, metric, method, samples, seed))
        .map_err(to_py)?;
    Ok((r.value, r.err_estimate))
}

#[pyfunction]
#[pyo3(signature = (cfg, method = "exact"))]
fn sop(py: Python<'_>, cfg: &Bound<'_, PyAny>, method: &str) -> PyResult<f64> {
    Ok(evaluate(py, cfg, "sop", method, 1_000_000, 1)?.0)
}

#[pyfunction]
#[pyo3(signature = (cfg, method = "exact"))]
fn pnz(py: Python<'_>, cfg: &Bound<'_, PyAny>, method: &str) -> PyResult<f64> {
    Ok(evaluate(py, cfg, "pnz", method, 1_000_000, 1)?.0)
}

#[pyfunction]
#[pyo3(signature = (cfg, method = "exact"))]
fn asc(py: Python<'_>, cfg: &Bound<'_, PyAny>, method: &str) -> PyResult<f64> {
    Ok(evaluate(py, cfg, "asc", method, 1_000_000, 1)?.0)
}

/// Monte-Carlo estimate as `(value, std_err)`.
#[pyfunction]
#[pyo3(signature = (cfg, metric, samples = 1_000_000, seed = 1))]
fn monte_carlo(py: Python<'_>, cfg: &Bound<'_, PyAny>, metric: &str, samples: usize, seed: u64) -> PyResult<(f64, f64)> {
    let s = scenario(cfg)?;
    let f: fn(Scenario, usize, u64) -> foxsec::Result<McEstimate> = match metric.parse().map_err(to_py)? {
        Metric::Sop => montecarlo::mc_sop,
        Metric::Pnz => montecarlo::mc_pnz,
        Metric::Asc => montecarlo::mc_asc,
    };
    let e = py.detach(|| f(s, samples, seed)).map_err(to_py)?;
    Ok((e.value, e.std_err))
}

#[pymodule]
fn foxsec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFadingModel>()?;
    m.add_class::<PyWiretapConfig>()?;
    m.add_class::<PyCollusionConfig>()?;
    m.add_function(wrap_pyfunction!(from_json, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(sop, m)?)?;
    m.add_function(wrap_pyfunction!(pnz, m)?)?;
    m.add_function(wrap_pyfunction!(asc, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo, m)?)?;
    Ok(())
}
