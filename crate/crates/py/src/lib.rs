//! Python bindings. Rationals cross the boundary as `fractions.Fraction`,
//! intervals as `(lo, hi)` pairs of anything with `numerator` and
//! `denominator` (ints included).

use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use littlewood_core as core;
use littlewood_core::{Rat, SearchConfig, Strategy, UnitInterval};

fn err(e: core::Error) -> PyErr {
    match e {
        core::Error::Io(_) | core::Error::DepthUnreachable { .. } | core::Error::StageTwoExhausted { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_fraction<'py>(py: Python<'py>, q: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.numer().clone(), q.denom().clone()))
}

fn from_fraction(obj: &Bound<'_, PyAny>) -> PyResult<Rat> {
    let numer: BigInt = obj.getattr("numerator")?.extract()?;
    let denom: BigInt = obj.getattr("denominator")?.extract()?;
    Rat::new(numer, denom).map_err(err)
}

fn interval(pair: (Bound<'_, PyAny>, Bound<'_, PyAny>)) -> PyResult<UnitInterval> {
    UnitInterval::new(from_fraction(&pair.0)?, from_fraction(&pair.1)?).map_err(err)
}

fn strategy(name: &str) -> PyResult<Strategy> {
    name.parse().map_err(err)
}

/// Exact report of one inequality check.
#[pyclass(frozen, name = "BoundReport")]
struct PyBoundReport {
    inner: core::BoundReport,
}

#[pymethods]
impl PyBoundReport {
    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.pass
    }

    /// `lhs` as an exact string (`p/q`, or `r+s*sqrt5`).
    #[getter]
    fn lhs(&self) -> String {
        self.inner.lhs.to_string()
    }

    #[getter]
    fn rhs(&self) -> String {
        self.inner.rhs_surd.clone().unwrap_or_else(|| self.inner.rhs.to_string())
    }

    #[getter]
    fn decimal(&self) -> &str {
        &self.inner.decimal
    }

    #[getter]
    fn witness(&self) -> Vec<String> {
        self.inner.witness.clone()
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.inner.notes.clone()
    }

    /// `(name, passed, detail)` per check of a composite report.
    #[getter]
    fn checks(&self) -> Vec<(String, bool, String)> {
        self.inner.checks.iter().map(|c| (c.name.clone(), c.pass, c.detail.clone())).collect()
    }

    /// `lhs` as a Fraction, or None when it is irrational.
    fn lhs_fraction<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.inner.lhs.as_rational().map(|q| to_fraction(py, q)).transpose()
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __bool__(&self) -> bool {
        self.inner.pass
    }

    fn __repr__(&self) -> String {
        format!("<BoundReport {} lhs={} pass={}>", self.inner.name, self.inner.lhs, self.inner.pass)
    }
}

fn report(inner: core::BoundReport) -> PyBoundReport {
    PyBoundReport { inner }
}

#[pyclass(frozen, name = "LemmaWitness")]
struct PyLemmaWitness {
    inner: core::LemmaWitness,
}

#[pymethods]
impl PyLemmaWitness {
    #[getter]
    fn n(&self) -> u32 {
        self.inner.n
    }

    #[getter]
    fn a(&self) -> BigUint {
        self.inner.a.clone()
    }

    #[getter]
    fn alpha<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_fraction(py, &self.inner.alpha_n)
    }

    #[getter]
    fn beta<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_fraction(py, &self.inner.beta_n)
    }

    #[getter]
    fn strategy(&self) -> String {
        self.inner.strategy_used.to_string()
    }

    fn verify(
        &self,
        i: (Bound<'_, PyAny>, Bound<'_, PyAny>),
        j: (Bound<'_, PyAny>, Bound<'_, PyAny>),
    ) -> PyResult<PyBoundReport> {
        Ok(report(core::verify_witness(&self.inner, &interval(i)?, &interval(j)?)))
    }

    fn __repr__(&self) -> String {
        format!("<LemmaWitness n={} a={} via {}>", self.inner.n, self.inner.a, self.inner.strategy_used)
    }
}

#[pyclass(frozen, name = "Certificate")]
struct PyCertificate {
    inner: core::Certificate,
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    #[pyo3(signature = (depth, n0 = 5, delta = "pow2", strategy = "auto"))]
    fn build(py: Python<'_>, depth: usize, n0: u32, delta: &str, strategy: &str) -> PyResult<Self> {
        let schedule: core::DeltaSchedule = delta.parse().map_err(err)?;
        let cfg = SearchConfig::with_strategy(self::strategy(strategy)?);
        let inner = py.detach(|| core::build(depth, schedule, n0, &cfg)).map_err(err)?;
        Ok(PyCertificate { inner })
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyCertificate { inner: core::Certificate::from_json(s).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(err)
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    #[getter]
    fn schedule(&self) -> &str {
        &self.inner.schedule
    }

    /// One dict per stage with exact Fraction values.
    fn stages<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.inner
            .stages
            .iter()
            .map(|s| {
                let d = PyDict::new(py);
                d.set_item("nu", s.nu)?;
                d.set_item("n", s.n)?;
                d.set_item("a", s.a.clone())?;
                d.set_item("delta", to_fraction(py, &s.delta)?)?;
                d.set_item("alpha", to_fraction(py, &s.alpha)?)?;
                d.set_item("beta", to_fraction(py, &s.beta)?)?;
                d.set_item("I", (to_fraction(py, s.i.lo())?, to_fraction(py, s.i.hi())?))?;
                d.set_item("J", (to_fraction(py, s.j.lo())?, to_fraction(py, s.j.hi())?))?;
                Ok(d)
            })
            .collect()
    }

    /// `(alpha, beta, err)` at `level`.
    fn approximants<'py>(
        &self,
        py: Python<'py>,
        level: usize,
    ) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        let (a, b, e) = core::approximants(&self.inner, level).map_err(err)?;
        Ok((to_fraction(py, &a)?, to_fraction(py, &b)?, to_fraction(py, &e)?))
    }

    fn verify(&self) -> PyBoundReport {
        report(core::verify_certificate(&self.inner))
    }

    fn littlewood_lower_bound(&self, py: Python<'_>, level: usize, proxy: usize) -> PyResult<PyBoundReport> {
        py.detach(|| core::littlewood_lower_bound(&self.inner, level, proxy)).map(report).map_err(err)
    }

    fn __repr__(&self) -> String {
        let ns: Vec<u32> = self.inner.stages.iter().map(|s| s.n).collect();
        format!("<Certificate {} n={:?}>", self.inner.schedule, ns)
    }
}

#[pyfunction]
fn fib(k: u32) -> PyResult<BigUint> {
    core::fib(k).map_err(err)
}

#[pyfunction]
fn golden_convergent(py: Python<'_>, n: u32) -> PyResult<Bound<'_, PyAny>> {
    to_fraction(py, &core::golden_convergent(n).map_err(err)?)
}

#[pyfunction]
fn cf_expand(q: &Bound<'_, PyAny>) -> PyResult<Vec<BigUint>> {
    core::cf_expand(&from_fraction(q)?).map_err(err)
}

#[pyfunction]
fn zeckendorf(m: BigUint) -> Vec<u32> {
    core::zeckendorf(&m).indices().to_vec()
}

#[pyfunction]
fn fib_gcd(m: u32, n: u32) -> PyResult<BigUint> {
    core::fib_gcd(m, n).map_err(err)
}

#[pyfunction]
fn dist_int<'py>(py: Python<'py>, q: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    to_fraction(py, &core::dist_int(&from_fraction(q)?))
}

#[pyfunction]
fn select_kstar(n: u32) -> PyResult<u32> {
    core::select_kstar(n).map_err(err)
}

/// Numerator `a` coprime to `F_n` with `a/F_n` in `i` and
/// `{F_(n-1) a / F_n}` in `j`, or None.
#[pyfunction]
#[pyo3(signature = (n, i, j, strategy = "auto"))]
fn find_witness(
    py: Python<'_>,
    n: u32,
    i: (Bound<'_, PyAny>, Bound<'_, PyAny>),
    j: (Bound<'_, PyAny>, Bound<'_, PyAny>),
    strategy: &str,
) -> PyResult<Option<PyLemmaWitness>> {
    let (i, j) = (interval(i)?, interval(j)?);
    let cfg = SearchConfig::with_strategy(self::strategy(strategy)?);
    let found = py.detach(|| core::find(n, &i, &j, &cfg)).map_err(err)?;
    Ok(found.map(|inner| PyLemmaWitness { inner }))
}

/// `{"n", "a", "x_min", "value", "scaled"}` of the exhaustive minimum.
#[pyfunction]
fn min_product(py: Python<'_>, n: u32, a: BigUint) -> PyResult<Bound<'_, PyDict>> {
    let rec = py.detach(|| core::min_product(n, &a)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", rec.n)?;
    d.set_item("a", rec.a)?;
    d.set_item("x_min", rec.x_min)?;
    d.set_item("value", to_fraction(py, &rec.value)?)?;
    d.set_item("scaled", to_fraction(py, &rec.scaled)?)?;
    Ok(d)
}

#[pyfunction]
fn check_q5(py: Python<'_>, n: u32, a: BigUint) -> PyResult<PyBoundReport> {
    py.detach(|| core::check_q5(n, &a)).map(report).map_err(err)
}

#[pyfunction]
fn check_q1(py: Python<'_>, n: u32, x_max: u64) -> PyResult<PyBoundReport> {
    py.detach(|| core::check_q1(n, x_max)).map(report).map_err(err)
}

#[pyfunction]
fn gap_convergents(n: u32, k: u32) -> PyResult<PyBoundReport> {
    core::gap_convergents(n, k).map(report).map_err(err)
}

/// `{"n", "count", "dstar", "scaled", "log_ratio"}` for the golden rotation.
#[pyfunction]
fn star_discrepancy(py: Python<'_>, n: u32, count: u64) -> PyResult<Bound<'_, PyDict>> {
    let rec = py.detach(|| core::star_discrepancy(n, count)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", rec.n)?;
    d.set_item("count", rec.count)?;
    d.set_item("dstar", to_fraction(py, &rec.dstar)?)?;
    d.set_item("scaled", to_fraction(py, &rec.scaled)?)?;
    d.set_item("log_ratio", rec.log_ratio)?;
    Ok(d)
}

#[pyfunction]
fn star_discrepancy_points<'py>(py: Python<'py>, points: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
    let pts = points.iter().map(from_fraction).collect::<PyResult<Vec<_>>>()?;
    to_fraction(py, &core::oracle::star_discrepancy_points(&pts).map_err(err)?)
}

#[pymodule]
fn littlewood(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBoundReport>()?;
    m.add_class::<PyLemmaWitness>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(fib, m)?)?;
    m.add_function(wrap_pyfunction!(golden_convergent, m)?)?;
    m.add_function(wrap_pyfunction!(cf_expand, m)?)?;
    m.add_function(wrap_pyfunction!(zeckendorf, m)?)?;
    m.add_function(wrap_pyfunction!(fib_gcd, m)?)?;
    m.add_function(wrap_pyfunction!(dist_int, m)?)?;
    m.add_function(wrap_pyfunction!(select_kstar, m)?)?;
    m.add_function(wrap_pyfunction!(find_witness, m)?)?;
    m.add_function(wrap_pyfunction!(min_product, m)?)?;
    m.add_function(wrap_pyfunction!(check_q5, m)?)?;
    m.add_function(wrap_pyfunction!(check_q1, m)?)?;
    m.add_function(wrap_pyfunction!(gap_convergents, m)?)?;
    m.add_function(wrap_pyfunction!(star_discrepancy, m)?)?;
    m.add_function(wrap_pyfunction!(star_discrepancy_points, m)?)?;
    m.add("THEOREM_CONSTANT", core::report::THEOREM_CONSTANT_LABEL)?;
    Ok(())
}
