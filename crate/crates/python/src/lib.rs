//! Python bindings for `canoma-core`.
//!
//! ```python
//! import canoma
//! p = canoma.SystemParams(snr_db=20.0, beta=2.0, rate=2.0)
//! p.union_outage(0.2, "CA-NOMA")          # 0.0396872...
//! p.estimate_outage(0.2, "CA-NOMA", 100_000, seed=1).p_union
//! ```
//!
//! Scheme names are `"CA-NOMA"`, `"NOMA"` and `"OMA"` (case-insensitive).
//! Invalid parameters raise `ValueError`.

use canoma_core::harness::{self, Experiment, HarnessError, RunConfig};
use canoma_core::model::{self, Feasibility};
use canoma_core::montecarlo::point_seed as core_point_seed;
use canoma_core::outage::Source;
use canoma_core::{optimizer, sampler, ChannelSampler, PowerSplit, SamplerSeed, Scheme};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn split(a: f64) -> PyResult<PowerSplit> {
    PowerSplit::new(a).map_err(value_err)
}

fn scheme(name: &str) -> PyResult<Scheme> {
    name.parse().map_err(value_err)
}

/// The split argument for a scheme; OMA ignores it and may omit it.
fn scheme_split(s: Scheme, a: Option<f64>) -> PyResult<PowerSplit> {
    match (s, a) {
        (_, Some(a)) => split(a),
        (Scheme::Oma, None) => split(0.5),
        (_, None) => Err(PyValueError::new_err(format!("{s} needs a power split"))),
    }
}

/// Per-event outage probabilities for one operating point.
#[pyclass(name = "OutageBreakdown", frozen, module = "canoma")]
struct PyOutageBreakdown {
    #[pyo3(get)]
    p_a1: f64,
    #[pyo3(get)]
    p_a2: f64,
    #[pyo3(get)]
    p_a21: f64,
    #[pyo3(get)]
    p_union: f64,
    /// Standard error of `p_union`; 0 for analytic results.
    #[pyo3(get)]
    se_union: f64,
    /// `"analytic"` or `"empirical"`.
    #[pyo3(get)]
    source: &'static str,
}

impl From<canoma_core::OutageBreakdown> for PyOutageBreakdown {
    fn from(b: canoma_core::OutageBreakdown) -> Self {
        Self {
            p_a1: b.p_a1,
            p_a2: b.p_a2,
            p_a21: b.p_a21,
            p_union: b.p_union,
            se_union: b.se_union,
            source: match b.source {
                Source::Analytic => "analytic",
                Source::Empirical => "empirical",
            },
        }
    }
}

#[pymethods]
impl PyOutageBreakdown {
    fn __repr__(&self) -> String {
        format!(
            "OutageBreakdown(p_a1={}, p_a2={}, p_a21={}, p_union={}, se_union={}, source='{}')",
            self.p_a1, self.p_a2, self.p_a21, self.p_union, self.se_union, self.source
        )
    }
}

/// Closed-form approximation of the outage-minimizing CA-NOMA split.
#[pyclass(name = "ClosedFormMin", frozen, module = "canoma")]
struct PyClosedFormMin {
    /// Root clamped to `1/(1+2^R0)`.
    #[pyo3(get)]
    a: f64,
    #[pyo3(get)]
    unclamped: f64,
    #[pyo3(get)]
    clamped: bool,
    #[pyo3(get)]
    a0: f64,
    #[pyo3(get)]
    a1: f64,
    #[pyo3(get)]
    a2: f64,
    #[pyo3(get)]
    a3: f64,
}

#[pymethods]
impl PyClosedFormMin {
    fn __repr__(&self) -> String {
        format!(
            "ClosedFormMin(a={}, unclamped={}, clamped={})",
            self.a, self.unclamped, self.clamped
        )
    }
}

/// Transmit SNR, mean channel power and target rate.
#[pyclass(name = "SystemParams", frozen, module = "canoma")]
struct PySystemParams(canoma_core::SystemParams);

#[pymethods]
impl PySystemParams {
    #[new]
    #[pyo3(signature = (snr_db = 20.0, beta = 2.0, rate = 2.0))]
    fn new(snr_db: f64, beta: f64, rate: f64) -> PyResult<Self> {
        canoma_core::SystemParams::from_db(snr_db, beta, rate)
            .map(Self)
            .map_err(value_err)
    }

    /// Builds from a linear SNR instead of dB.
    #[staticmethod]
    fn from_linear(snr: f64, beta: f64, rate: f64) -> PyResult<Self> {
        canoma_core::SystemParams::new(snr, beta, rate)
            .map(Self)
            .map_err(value_err)
    }

    #[getter]
    fn snr(&self) -> f64 {
        self.0.snr()
    }

    #[getter]
    fn snr_db(&self) -> f64 {
        self.0.snr_db()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta()
    }

    #[getter]
    fn rate(&self) -> f64 {
        self.0.rate()
    }

    /// `1/(1+2^R0)`, the largest split where user-2's own threshold dominates.
    #[getter]
    fn balanced_split(&self) -> f64 {
        self.0.balanced_split()
    }

    /// `2^-R0`; SIC always fails at or above it.
    #[getter]
    fn sic_limit(&self) -> f64 {
        self.0.sic_limit()
    }

    /// `(4^R0 - 1)/xi`.
    #[getter]
    fn oma_threshold(&self) -> f64 {
        self.0.oma_threshold()
    }

    fn oma_capacity(&self, g: f64) -> PyResult<f64> {
        model::oma_capacity(&self.0, g).map_err(value_err)
    }

    /// Interference-free capacities `(C1, C2)` of the two CA-NOMA users.
    fn ca_noma_capacities(&self, a: f64, g1: f64, g2: f64) -> PyResult<(f64, f64)> {
        let a = split(a)?;
        Ok((
            model::ca_noma_capacity_user1(&self.0, a, g1).map_err(value_err)?,
            model::ca_noma_capacity_user2(&self.0, a, g2).map_err(value_err)?,
        ))
    }

    /// Rate at which a user with gain `g` decodes the strong user's signal.
    fn sic_capacity(&self, a: f64, g: f64) -> PyResult<f64> {
        model::sic_capacity(&self.0, split(a)?, g).map_err(value_err)
    }

    /// `(b1, b2, b21)`; `b21` is `None` when SIC is infeasible.
    fn thresholds(&self, a: f64) -> PyResult<(f64, f64, Option<f64>)> {
        let a = split(a)?;
        Ok((
            model::threshold_b1(&self.0, a),
            model::threshold_b2(&self.0, a),
            model::threshold_b21(&self.0, a).gain(),
        ))
    }

    fn feasibility(&self, a: f64) -> PyResult<&'static str> {
        Ok(Feasibility::classify(&self.0, split(a)?).describe())
    }

    /// `Pr{g1 >= t1, g2 >= t2}` for the ordered pair.
    fn joint_survival(&self, t1: f64, t2: f64) -> PyResult<f64> {
        sampler::joint_survival(&self.0, t1, t2).map_err(value_err)
    }

    #[pyo3(signature = (a = None, scheme = "CA-NOMA"))]
    fn union_outage(&self, a: Option<f64>, scheme: &str) -> PyResult<f64> {
        let s = self::scheme(scheme)?;
        Ok(canoma_core::outage_breakdown_analytic(&self.0, scheme_split(s, a)?, s).p_union)
    }

    #[pyo3(signature = (a = None, scheme = "CA-NOMA"))]
    fn breakdown(&self, a: Option<f64>, scheme: &str) -> PyResult<PyOutageBreakdown> {
        let s = self::scheme(scheme)?;
        Ok(canoma_core::outage_breakdown_analytic(&self.0, scheme_split(s, a)?, s).into())
    }

    /// Raises `ValueError` when the approximation is out of model.
    fn a_min_closed_form(&self) -> PyResult<PyClosedFormMin> {
        let m = optimizer::a_min_closed_form(&self.0).map_err(value_err)?;
        let c = m.intermediates;
        Ok(PyClosedFormMin {
            a: m.a.value(),
            unclamped: m.unclamped,
            clamped: m.clamped,
            a0: c.a0,
            a1: c.a1,
            a2: c.a2,
            a3: c.a3,
        })
    }

    #[pyo3(signature = (tol = optimizer::DEFAULT_TOL))]
    fn a_min_numeric(&self, tol: f64) -> PyResult<f64> {
        optimizer::a_min_numeric(&self.0, tol)
            .map(PowerSplit::value)
            .map_err(value_err)
    }

    /// Outage-minimizing split for plain NOMA.
    #[pyo3(signature = (tol = optimizer::DEFAULT_TOL))]
    fn a_star_noma(&self, tol: f64) -> PyResult<f64> {
        optimizer::a_star_noma_numeric(&self.0, tol)
            .map(PowerSplit::value)
            .map_err(value_err)
    }

    /// Monte Carlo estimate from `n_samples` draws. The result does not
    /// depend on `n_streams`.
    #[pyo3(signature = (a, scheme, n_samples, seed, n_streams = 1))]
    fn estimate_outage(
        &self,
        py: Python<'_>,
        a: Option<f64>,
        scheme: &str,
        n_samples: u64,
        seed: u64,
        n_streams: u32,
    ) -> PyResult<PyOutageBreakdown> {
        let s = self::scheme(scheme)?;
        let a = scheme_split(s, a)?;
        let cfg = canoma_core::McConfig::new(n_samples, seed, n_streams).map_err(value_err)?;
        let p = self.0;
        py.detach(|| canoma_core::estimate_outage(&p, a, s, &cfg))
            .map(Into::into)
            .map_err(value_err)
    }

    /// First `n` ordered pairs `(g1, g2)` of the given seed and stream.
    #[pyo3(signature = (n, seed, stream = 0))]
    fn sample_pairs(&self, n: usize, seed: u64, stream: u64) -> Vec<(f64, f64)> {
        ChannelSampler::new(&self.0, SamplerSeed::new(seed, stream))
            .take(n)
            .map(|c| (c.g1(), c.g2()))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "SystemParams(snr_db={}, beta={}, rate={})",
            self.0.snr_db(),
            self.0.beta(),
            self.0.rate()
        )
    }
}

#[pyfunction]
fn db_to_linear(db: f64) -> f64 {
    model::db_to_linear(db)
}

#[pyfunction]
fn linear_to_db(linear: f64) -> f64 {
    model::linear_to_db(linear)
}

/// Master seed used for grid point `index` of a sweep seeded with `seed`.
#[pyfunction]
fn point_seed(seed: u64, index: usize) -> u64 {
    core_point_seed(seed, index)
}

/// Runs a harness experiment and returns `(report, rendered_rows)`.
///
/// `settings` maps config-file keys to values, e.g. `{"samples": 10_000, "grid_points": 5}`.
/// Values are converted with `str()` and parsed like config-file text.
#[pyfunction]
#[pyo3(signature = (experiment, settings = None))]
fn run_experiment(
    py: Python<'_>,
    experiment: &str,
    settings: Option<&Bound<'_, PyDict>>,
) -> PyResult<(Option<String>, String)> {
    let experiment: Experiment = experiment
        .parse()
        .map_err(|e: HarnessError| value_err(e.message()))?;
    let mut cfg = RunConfig::defaults(experiment);
    if let Some(settings) = settings {
        for (key, value) in settings.iter() {
            let key: String = key.extract()?;
            let value = value.str()?.to_string();
            cfg.set(&key, &value).map_err(|e| value_err(e.message()))?;
        }
    }
    py.detach(|| {
        let out = harness::run(&cfg)?;
        let rendered = out.render(&cfg)?;
        Ok::<_, HarnessError>((out.report, rendered))
    })
    .map_err(|e| value_err(e.message()))
}

#[pymodule]
fn canoma(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PySystemParams>()?;
    m.add_class::<PyOutageBreakdown>()?;
    m.add_class::<PyClosedFormMin>()?;
    m.add_function(wrap_pyfunction!(db_to_linear, m)?)?;
    m.add_function(wrap_pyfunction!(linear_to_db, m)?)?;
    m.add_function(wrap_pyfunction!(point_seed, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
