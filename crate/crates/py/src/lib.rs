//! Python bindings for the `lhv` crate.
//!
//! Exposes the main types (`ContextDistribution`, `LocalResponses`,
//! `LocalModel`, `Behavior`, `TradeoffReport`, `ExperimentRecord`) and the
//! operations on them: measures, optimal CHSH values, trade-off bounds and
//! certification, witness search, coarse graining, the saturating families,
//! region sweeps, simulation, and the model-file format.
//!
//! Build as `lhv_py` (cdylib) and import it directly:
//!
//!     import lhv_py
//!     dist = lhv_py.tight_model("h1", 0.5)
//!     assert abs(dist.optimal_chsh() - 3.0) < 1e-12

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use lhv::bounds;
use lhv::io;
use lhv::measures;
use lhv::model::MeasurementContext;
use lhv::montecarlo;
use lhv::tight;

fn to_py_err(err: lhv::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn parse_mode(mode: &str) -> PyResult<measures::HiddennessMode> {
    mode.parse().map_err(to_py_err)
}

fn context(x: u8, y: u8) -> PyResult<MeasurementContext> {
    MeasurementContext::new(x, y).map_err(to_py_err)
}

/// The four conditional hidden-value distributions, one row per context in
/// the order (0,0), (0,1), (1,0), (1,1).
#[pyclass(name = "ContextDistribution", from_py_object)]
#[derive(Clone)]
struct PyContextDistribution {
    inner: lhv::ContextDistribution,
}

#[pymethods]
impl PyContextDistribution {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self {
            inner: lhv::ContextDistribution::from_rows(rows).map_err(to_py_err)?,
        })
    }

    /// Measurement-independent uniform distribution over n hidden values.
    #[staticmethod]
    fn uniform(n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: lhv::ContextDistribution::uniform(n).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner.rows().to_vec()
    }

    /// Settings-dependence measure M in [0, 2].
    fn measurement_dependence(&self) -> f64 {
        measures::measurement_dependence(&self.inner)
    }

    /// Hiddenness H; mode is "declared" or "effective".
    #[pyo3(signature = (mode = "declared"))]
    fn hiddenness(&self, mode: &str) -> PyResult<usize> {
        Ok(measures::hiddenness(&self.inner, parse_mode(mode)?))
    }

    /// Optimal CHSH value 4 − 2·Σ_λ minᵢ p(λ|i).
    fn optimal_chsh(&self) -> f64 {
        bounds::optimal_chsh(&self.inner)
    }

    /// Enumeration oracle for the optimal CHSH value.
    #[pyo3(signature = (cap = None))]
    fn brute_force_optimal_chsh(&self, cap: Option<usize>) -> PyResult<f64> {
        let cap = cap.unwrap_or(bounds::DEFAULT_ORACLE_CAP);
        bounds::brute_force_optimal_chsh_with_cap(&self.inner, cap).map_err(to_py_err)
    }

    /// Deterministic responses attaining the optimal CHSH value.
    fn optimal_responses(&self) -> PyLocalResponses {
        PyLocalResponses {
            inner: bounds::optimal_responses(&self.inner),
        }
    }

    /// Per-hidden-value minimizing context indices (1..=4, ties downward).
    fn min_context_per_lambda(&self) -> Vec<usize> {
        bounds::min_context_per_lambda(&self.inner)
    }

    /// Σ_λ minᵢ p(λ|i).
    fn min_support_sum(&self) -> f64 {
        bounds::min_support_sum(&self.inner)
    }

    /// Drops hidden values without support in any context.
    fn trim_zeros(&self) -> Self {
        Self {
            inner: measures::trim_zero_lambdas(&self.inner),
        }
    }

    /// Appends zero-probability hidden values up to cardinality n.
    fn padded(&self, n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.padded(n).map_err(to_py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("ContextDistribution(n={})", self.inner.n())
    }
}

/// Per-party probabilities of outcome +1, one row per own setting.
#[pyclass(name = "LocalResponses", from_py_object)]
#[derive(Clone)]
struct PyLocalResponses {
    inner: lhv::LocalResponses,
}

#[pymethods]
impl PyLocalResponses {
    #[new]
    fn new(a_plus: Vec<Vec<f64>>, b_plus: Vec<Vec<f64>>) -> PyResult<Self> {
        let to_pair = |rows: Vec<Vec<f64>>, name: &str| -> PyResult<[Vec<f64>; 2]> {
            rows.try_into().map_err(|r: Vec<Vec<f64>>| {
                PyValueError::new_err(format!("{name} must have 2 rows, got {}", r.len()))
            })
        };
        Ok(Self {
            inner: lhv::LocalResponses::new(
                to_pair(a_plus, "a_plus")?,
                to_pair(b_plus, "b_plus")?,
            )
            .map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn a_plus(&self) -> Vec<Vec<f64>> {
        self.inner.a_rows().to_vec()
    }

    fn b_plus(&self) -> Vec<Vec<f64>> {
        self.inner.b_rows().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("LocalResponses(n={})", self.inner.n())
    }
}

/// The observable joint probabilities p(a,b|x,y).
#[pyclass(name = "Behavior", skip_from_py_object)]
#[derive(Clone)]
struct PyBehavior {
    inner: lhv::Behavior,
}

#[pymethods]
impl PyBehavior {
    /// 4 × 4 table: rows are contexts, columns the outcome pairs
    /// (+,+), (+,−), (−,+), (−,−).
    fn joint(&self) -> Vec<Vec<f64>> {
        self.inner.joint().iter().map(|row| row.to_vec()).collect()
    }

    /// ⟨xy⟩ for the context (x, y).
    fn correlator(&self, x: u8, y: u8) -> PyResult<f64> {
        Ok(self.inner.correlator(context(x, y)?))
    }

    /// CHSH value ⟨00⟩ + ⟨01⟩ + ⟨10⟩ − ⟨11⟩.
    fn chsh(&self) -> f64 {
        self.inner.chsh()
    }

    fn __repr__(&self) -> String {
        format!("Behavior(chsh={:.6})", self.inner.chsh())
    }
}

/// Quantities and flags of the per-model trade-off certification.
#[pyclass(name = "TradeoffReport", skip_from_py_object)]
#[derive(Clone)]
struct PyTradeoffReport {
    inner: bounds::TradeoffReport,
}

#[pymethods]
impl PyTradeoffReport {
    #[getter]
    fn hiddenness(&self) -> usize {
        self.inner.hiddenness
    }

    #[getter]
    fn dependence(&self) -> f64 {
        self.inner.dependence
    }

    #[getter]
    fn chsh(&self) -> f64 {
        self.inner.chsh
    }

    #[getter]
    fn optimal_chsh(&self) -> f64 {
        self.inner.optimal_chsh
    }

    #[getter]
    fn lower_bound(&self) -> f64 {
        self.inner.lower_bound
    }

    #[getter]
    fn upper_bound(&self) -> f64 {
        self.inner.upper_bound
    }

    #[getter]
    fn chsh_within_optimal(&self) -> bool {
        self.inner.chsh_within_optimal
    }

    #[getter]
    fn optimal_within_upper(&self) -> bool {
        self.inner.optimal_within_upper
    }

    #[getter]
    fn lower_within_optimal(&self) -> bool {
        self.inner.lower_within_optimal
    }

    fn all_satisfied(&self) -> bool {
        self.inner.all_satisfied()
    }

    fn __repr__(&self) -> String {
        format!(
            "TradeoffReport(H={}, M={:.6}, C={:.6}, C_opt={:.6}, ok={})",
            self.inner.hiddenness,
            self.inner.dependence,
            self.inner.chsh,
            self.inner.optimal_chsh,
            self.inner.all_satisfied()
        )
    }
}

/// Counts of one simulated experiment.
#[pyclass(name = "ExperimentRecord", skip_from_py_object)]
#[derive(Clone)]
struct PyExperimentRecord {
    inner: montecarlo::ExperimentRecord,
}

#[pymethods]
impl PyExperimentRecord {
    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn trials(&self) -> [u64; 4] {
        self.inner.trials
    }

    /// counts[context][pair] with pairs ordered (+,+), (+,−), (−,+), (−,−).
    fn counts(&self) -> Vec<Vec<u64>> {
        self.inner.counts.iter().map(|row| row.to_vec()).collect()
    }

    fn to_json(&self) -> String {
        io::record_to_json(&self.inner, None)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::parse_record_file(text).map_err(to_py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "ExperimentRecord(seed={}, trials={:?})",
            self.inner.seed, self.inner.trials
        )
    }
}

/// A local hidden-variable model: distribution plus responses.
#[pyclass(name = "LocalModel", skip_from_py_object)]
#[derive(Clone)]
struct PyLocalModel {
    inner: lhv::LocalModel,
}

#[pymethods]
impl PyLocalModel {
    #[new]
    fn new(dist: PyContextDistribution, responses: PyLocalResponses) -> PyResult<Self> {
        Ok(Self {
            inner: lhv::LocalModel::new(dist.inner, responses.inner).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn dist(&self) -> PyContextDistribution {
        PyContextDistribution {
            inner: self.inner.dist().clone(),
        }
    }

    #[getter]
    fn responses(&self) -> PyLocalResponses {
        PyLocalResponses {
            inner: self.inner.responses().clone(),
        }
    }

    /// The joint behavior generated by the model.
    fn behavior(&self) -> PyBehavior {
        PyBehavior {
            inner: self.inner.behavior(),
        }
    }

    /// Certifies the trade-off bounds for this model.
    #[pyo3(signature = (mode = "declared"))]
    fn check_tradeoff(&self, mode: &str) -> PyResult<PyTradeoffReport> {
        Ok(PyTradeoffReport {
            inner: bounds::check_tradeoff(&self.inner, parse_mode(mode)?),
        })
    }

    /// Runs a reproducible simulated experiment.
    fn sample(&self, trials_per_context: u64, seed: u64) -> PyResult<PyExperimentRecord> {
        Ok(PyExperimentRecord {
            inner: montecarlo::sample(&self.inner, trials_per_context, seed).map_err(to_py_err)?,
        })
    }

    /// Model-file JSON (optionally with display labels).
    #[pyo3(signature = (lambda_labels = None))]
    fn to_json(&self, lambda_labels: Option<Vec<String>>) -> String {
        io::model_file_to_json(&self.inner, lambda_labels.as_deref())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::parse_model_file(text).map_err(to_py_err)?.model,
        })
    }

    fn __repr__(&self) -> String {
        format!("LocalModel(n={})", self.inner.n())
    }
}

/// One evaluated point of a curve or region sweep.
#[pyclass(name = "RegionPoint", skip_from_py_object)]
#[derive(Clone)]
struct PyRegionPoint {
    #[pyo3(get)]
    family: String,
    #[pyo3(get)]
    p: f64,
    #[pyo3(get)]
    t: f64,
    #[pyo3(get)]
    hiddenness: usize,
    #[pyo3(get)]
    dependence: f64,
    #[pyo3(get)]
    optimal_chsh: f64,
    #[pyo3(get)]
    lower: f64,
    #[pyo3(get)]
    upper: f64,
    #[pyo3(get)]
    boundary: String,
}

impl From<tight::RegionPoint> for PyRegionPoint {
    fn from(point: tight::RegionPoint) -> Self {
        PyRegionPoint {
            family: point.family.clone(),
            p: point.p,
            t: point.t,
            hiddenness: point.hiddenness,
            dependence: point.dependence,
            optimal_chsh: point.optimal_chsh,
            lower: point.lower,
            upper: point.upper,
            boundary: point.boundary.to_string(),
        }
    }
}

#[pymethods]
impl PyRegionPoint {
    fn __repr__(&self) -> String {
        format!(
            "RegionPoint(family={}, p={:.4}, t={:.4}, M={:.6}, C_opt={:.6}, {})",
            self.family, self.p, self.t, self.dependence, self.optimal_chsh, self.boundary
        )
    }
}

/// Half the L1 distance between two probability vectors.
#[pyfunction]
fn total_variation(p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
    measures::total_variation(&p, &q).map_err(to_py_err)
}

/// Largest CHSH contribution of one hidden value with context weights z.
#[pyfunction]
fn max_chsh_contribution(z: [f64; 4]) -> PyResult<f64> {
    let weights = bounds::ContextWeights::new(z).map_err(to_py_err)?;
    Ok(bounds::max_chsh_contribution(&weights))
}

/// Tight upper bound min( min(h,3)·m + 2, 4 ) on the optimal CHSH value.
#[pyfunction]
fn copt_upper_bound(h: usize, m: f64) -> PyResult<f64> {
    bounds::copt_upper_bound(h, m).map_err(to_py_err)
}

/// Tight lower bound m + 2 on the optimal CHSH value.
#[pyfunction]
fn copt_lower_bound(m: f64) -> PyResult<f64> {
    bounds::copt_lower_bound(m).map_err(to_py_err)
}

/// Smallest settings dependence compatible with CHSH value c at hiddenness h.
#[pyfunction]
fn min_dependence_for_chsh(c: f64, h: usize) -> PyResult<f64> {
    bounds::min_dependence_for_chsh(c, h).map_err(to_py_err)
}

/// Witness triple (i, j, lambda, lhs) for a 3-hidden-value distribution.
#[pyfunction]
fn bound_witness_n3(dist: &PyContextDistribution) -> PyResult<(usize, usize, usize, f64)> {
    let w = bounds::bound_witness_n3(&dist.inner).map_err(to_py_err)?;
    Ok((w.i, w.j, w.lambda, w.lhs))
}

/// Witness triple (i, j, lambda, lhs) for a 4-hidden-value distribution.
#[pyfunction]
fn bound_witness_n4(dist: &PyContextDistribution) -> PyResult<(usize, usize, usize, f64)> {
    let w = bounds::bound_witness_n4(&dist.inner).map_err(to_py_err)?;
    Ok((w.i, w.j, w.lambda, w.lhs))
}

/// Merges hidden values by minimizing context; returns the 4-value
/// distribution and the partition (0-based indices per context).
#[pyfunction]
fn coarse_grain(dist: &PyContextDistribution) -> PyResult<(PyContextDistribution, Vec<Vec<usize>>)> {
    let coarse = bounds::coarse_grain(&dist.inner).map_err(to_py_err)?;
    Ok((
        PyContextDistribution { inner: coarse.dist },
        coarse.partition.to_vec(),
    ))
}

/// Saturating-family table; family is "h1", "h2", or "h3plus".
#[pyfunction]
#[pyo3(signature = (family, p, pad_to = None))]
fn tight_model(family: &str, p: f64, pad_to: Option<usize>) -> PyResult<PyContextDistribution> {
    let id: tight::FamilyId = family.parse().map_err(to_py_err)?;
    let params = tight::TightFamily::new(id, p, pad_to).map_err(to_py_err)?;
    Ok(PyContextDistribution {
        inner: tight::tight_model(&params),
    })
}

/// Entrywise convex combination (1−t)·a + t·b.
#[pyfunction]
fn interpolate(
    a: &PyContextDistribution,
    b: &PyContextDistribution,
    t: f64,
) -> PyResult<PyContextDistribution> {
    Ok(PyContextDistribution {
        inner: tight::interpolate(&a.inner, &b.inner, t).map_err(to_py_err)?,
    })
}

/// Family curve over a uniform parameter grid.
#[pyfunction]
#[pyo3(signature = (family, steps, pad_to = None))]
fn family_curve(family: &str, steps: usize, pad_to: Option<usize>) -> PyResult<Vec<PyRegionPoint>> {
    let id: tight::FamilyId = family.parse().map_err(to_py_err)?;
    Ok(tight::family_curve(id, steps, pad_to)
        .map_err(to_py_err)?
        .into_iter()
        .map(Into::into)
        .collect())
}

/// Feasible-region sweep at fixed hiddenness.
#[pyfunction]
fn region_sweep(h: usize, grid_m: usize, grid_t: usize) -> PyResult<Vec<PyRegionPoint>> {
    Ok(tight::region_sweep(h, grid_m, grid_t)
        .map_err(to_py_err)?
        .into_iter()
        .map(Into::into)
        .collect())
}

/// Plug-in estimates (correlators, chsh, stderr) from a record.
#[pyfunction]
fn estimate(record: &PyExperimentRecord) -> PyResult<([f64; 4], f64, f64)> {
    let est = montecarlo::estimate(&record.inner).map_err(to_py_err)?;
    Ok((est.correlators, est.chsh, est.stderr))
}

/// Random model over n hidden values (simplex rows, uniform responses).
#[pyfunction]
fn random_model(n: usize, seed: u64) -> PyLocalModel {
    let mut rng = lhv::random::rng_from_seed(seed);
    PyLocalModel {
        inner: lhv::random::random_model(&mut rng, n),
    }
}

#[pymodule]
fn lhv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyContextDistribution>()?;
    m.add_class::<PyLocalResponses>()?;
    m.add_class::<PyLocalModel>()?;
    m.add_class::<PyBehavior>()?;
    m.add_class::<PyTradeoffReport>()?;
    m.add_class::<PyExperimentRecord>()?;
    m.add_class::<PyRegionPoint>()?;
    m.add_function(wrap_pyfunction!(total_variation, m)?)?;
    m.add_function(wrap_pyfunction!(max_chsh_contribution, m)?)?;
    m.add_function(wrap_pyfunction!(copt_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(copt_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(min_dependence_for_chsh, m)?)?;
    m.add_function(wrap_pyfunction!(bound_witness_n3, m)?)?;
    m.add_function(wrap_pyfunction!(bound_witness_n4, m)?)?;
    m.add_function(wrap_pyfunction!(coarse_grain, m)?)?;
    m.add_function(wrap_pyfunction!(tight_model, m)?)?;
    m.add_function(wrap_pyfunction!(interpolate, m)?)?;
    m.add_function(wrap_pyfunction!(family_curve, m)?)?;
    m.add_function(wrap_pyfunction!(region_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(random_model, m)?)?;
    m.add("RNG_STREAM_ID", montecarlo::RNG_STREAM_ID)?;
    Ok(())
}
