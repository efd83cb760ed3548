//! Python bindings: bundles, slopes, monodromy words, slope functions and
//! fiber sums. Complex values cross the boundary as Python `complex`;
//! structured reports come back as plain dicts.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;

use optb_core::charvariety::BundleParam;
use optb_core::chebyshev;
use optb_core::monodromy::{apply_word, parse_word, torsion_polynomial, MonodromyWord, TraceTriple};
use optb_core::torsion::{self, SlopeParam};
use optb_core::verifier;
use optb_core::Error;

create_exception!(optb, NonGenericError, PyValueError);

const TOL: f64 = optb_core::exactalg::roots::DEFAULT_TOL;

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::NonGeneric { .. } => NonGenericError::new_err(msg),
        Error::Domain(_) | Error::Parse { .. } | Error::DegenerateSlope { .. } => PyValueError::new_err(msg),
        Error::Vanishing(_) | Error::BranchPoint(_) => PyArithmeticError::new_err(msg),
        _ => PyRuntimeError::new_err(msg),
    }
}

fn json_to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn hyperbolic(n: i64) -> PyResult<BundleParam> {
    let bp = BundleParam::new(n);
    bp.require_hyperbolic().map_err(to_py)?;
    Ok(bp)
}

#[pyclass(name = "Bundle", module = "optb", frozen)]
struct PyBundle {
    inner: BundleParam,
}

#[pymethods]
impl PyBundle {
    #[new]
    fn new(n: i64) -> PyResult<Self> {
        Ok(PyBundle { inner: hyperbolic(n)? })
    }

    #[getter]
    fn n(&self) -> i64 {
        self.inner.n
    }

    #[getter]
    fn has_extra_component(&self) -> bool {
        self.inner.has_extra_component()
    }

    /// Exact algebraic fiber traces of the characters with `x = 0`.
    fn fibered_traces(&self) -> PyResult<Vec<f64>> {
        optb_core::charvariety::fibered_traces(self.inner).map_err(to_py)
    }

    /// `𝕋_λ` as `(numerator, denominator)` strings in `y`.
    fn torsion_lambda(&self) -> PyResult<(String, String)> {
        let t = torsion::torsion_lambda(self.inner).map_err(to_py)?;
        Ok((t.num().to_string(), t.den().to_string()))
    }

    fn torsion_lambda_at(&self, y: Complex64) -> PyResult<Complex64> {
        torsion::torsion_lambda(self.inner)
            .and_then(|t| t.eval_c(y))
            .map_err(to_py)
    }

    /// `[(name, passed, detail)]` for every exact identity.
    #[pyo3(signature = (slopes=None))]
    fn identities(&self, slopes: Option<Vec<(i64, i64)>>) -> PyResult<Vec<(String, bool, String)>> {
        let slopes = match slopes {
            Some(s) => s
                .into_iter()
                .map(|(p, q)| SlopeParam::new(p, q))
                .collect::<Result<Vec<_>, _>>()
                .map_err(to_py)?,
            None => verifier::default_slopes(),
        };
        let rep = verifier::identity_suite(self.inner, &slopes).map_err(to_py)?;
        Ok(rep.checks.into_iter().map(|c| (c.name, c.passed, c.detail)).collect())
    }

    /// Torsion of slope `(p, q)` on the extra component at meridian eigenvalue `m`.
    fn extra_torsion(&self, p: i64, q: i64, m: Complex64) -> PyResult<Complex64> {
        let slope = SlopeParam::class(p, q).map_err(to_py)?;
        Ok(torsion::extra_torsion(self.inner, slope, m).map_err(to_py)?.value)
    }

    fn fiber_sum_extra<'py>(&self, py: Python<'py>, p: i64, q: i64, c: Complex64) -> PyResult<Bound<'py, PyAny>> {
        let slope = SlopeParam::new(p, q).map_err(to_py)?;
        let rep = verifier::fiber_sum_extra(self.inner, slope, c, TOL).map_err(to_py)?;
        json_to_py(py, &rep)
    }

    fn __repr__(&self) -> String {
        format!("Bundle(n={})", self.inner.n)
    }
}

#[pyclass(name = "SlopeFns", module = "optb", frozen)]
struct PySlopeFns {
    inner: torsion::SlopeFns,
}

#[pymethods]
impl PySlopeFns {
    /// Certified slope functions of `γ = μ^p λ^q` on `M_n`.
    #[new]
    fn new(n: i64, p: i64, q: i64) -> PyResult<Self> {
        let bp = hyperbolic(n)?;
        let slope = SlopeParam::new(p, q).map_err(to_py)?;
        Ok(PySlopeFns {
            inner: torsion::slope_fns(bp, slope).map_err(to_py)?,
        })
    }

    #[getter]
    fn n(&self) -> i64 {
        self.inner.bp.n
    }

    #[getter]
    fn slope(&self) -> (i64, i64) {
        (self.inner.slope.p, self.inner.slope.q)
    }

    #[getter]
    fn trace_fn(&self) -> String {
        self.inner.trace_fn.to_string()
    }

    #[getter]
    fn g(&self) -> String {
        self.inner.g.to_string()
    }

    #[getter]
    fn h(&self) -> String {
        self.inner.h.to_string()
    }

    #[getter]
    fn degree_margin(&self) -> Option<i64> {
        self.inner.degree_margin()
    }

    fn torsion(&self, y: Complex64) -> PyResult<Complex64> {
        Ok(self.inner.torsion_at(y).map_err(to_py)?.value)
    }

    fn inv_torsion(&self, y: Complex64) -> PyResult<Complex64> {
        self.inner.inv_torsion_at(y).map_err(to_py)
    }

    /// Geometric fiber over `c` as a report dict.
    fn fiber_sum<'py>(&self, py: Python<'py>, c: Complex64) -> PyResult<Bound<'py, PyAny>> {
        let rep = verifier::fiber_sum_geometric_with(&self.inner, c, TOL).map_err(to_py)?;
        json_to_py(py, &rep)
    }

    /// Geometric and extra fibers over `c`.
    fn fiber_sum_all<'py>(&self, py: Python<'py>, c: Complex64) -> PyResult<Bound<'py, PyAny>> {
        let rep = verifier::fiber_sum_all(&self.inner, c, TOL).map_err(to_py)?;
        json_to_py(py, &rep)
    }

    /// Normalized residuals of `count` geometric fibers at seeded generic `c`.
    fn generic_residuals(&self, seed: u64, count: usize) -> PyResult<Vec<f64>> {
        let reps = verifier::generic_fiber_sums(&self.inner, seed, count, TOL).map_err(to_py)?;
        Ok(reps.iter().map(|r| r.normalized_residual).collect())
    }

    #[pyo3(signature = (samples=10, seed=0, c=None))]
    fn cross_check<'py>(
        &self,
        py: Python<'py>,
        samples: usize,
        seed: u64,
        c: Option<Complex64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let rep = verifier::cross_check(&self.inner, c, seed, samples, TOL).map_err(to_py)?;
        json_to_py(py, &rep)
    }

    fn __repr__(&self) -> String {
        format!(
            "SlopeFns(n={}, p={}, q={})",
            self.inner.bp.n, self.inner.slope.p, self.inner.slope.q
        )
    }
}

#[pyclass(name = "MonodromyWord", module = "optb", frozen)]
struct PyWord {
    inner: MonodromyWord,
}

#[pymethods]
impl PyWord {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyWord {
            inner: parse_word(text).map_err(to_py)?,
        })
    }

    /// `L R^{−(n+2)}`.
    #[staticmethod]
    fn bundle(n: i64) -> Self {
        PyWord {
            inner: MonodromyWord::bundle(n),
        }
    }

    fn inverse(&self) -> Self {
        PyWord {
            inner: self.inner.inverse(),
        }
    }

    fn __mul__(&self, other: &PyWord) -> Self {
        PyWord {
            inner: self.inner.concat(&other.inner),
        }
    }

    /// Image of `(x1, x2, x3)`.
    fn apply(&self) -> (String, String, String) {
        let [a, b, c] = apply_word(&self.inner, &TraceTriple::identity()).0;
        (a.to_string(), b.to_string(), c.to_string())
    }

    /// `3 − tr(Jacobian)` of the action.
    fn torsion_polynomial(&self) -> String {
        torsion_polynomial(&self.inner).to_string()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MonodromyWord({:?})", self.inner.to_string())
    }

    fn __eq__(&self, other: &PyWord) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
fn cheb(k: i64) -> String {
    chebyshev::cheb(k).to_string()
}

#[pyfunction]
fn cheb_eval(k: i64, y: Complex64) -> Complex64 {
    chebyshev::cheb_eval(k, y)
}

#[pyfunction]
fn extra_closed_form(n: i64, c: Complex64) -> Complex64 {
    verifier::extra_closed_form(n, c)
}

/// `(passed, report)` of the residue-theorem self-test.
#[pyfunction]
#[pyo3(signature = (seed=0, trials=200))]
fn jacobi_selftest<'py>(py: Python<'py>, seed: u64, trials: usize) -> PyResult<(bool, Bound<'py, PyAny>)> {
    let rep = verifier::jacobi_selftest(seed, trials).map_err(to_py)?;
    Ok((rep.passed(), json_to_py(py, &rep)?))
}

/// Runs the command-line tool in-process and returns its exit code.
#[pyfunction]
fn run_cli(args: &Bound<'_, PyList>) -> PyResult<i32> {
    let mut argv = vec!["optb".to_string()];
    for a in args.iter() {
        argv.push(a.extract()?);
    }
    Ok(optb_core::cli::run(argv))
}

#[pymodule]
fn optb(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("NonGenericError", m.py().get_type::<NonGenericError>())?;
    m.add_class::<PyBundle>()?;
    m.add_class::<PySlopeFns>()?;
    m.add_class::<PyWord>()?;
    m.add_function(wrap_pyfunction!(cheb, m)?)?;
    m.add_function(wrap_pyfunction!(cheb_eval, m)?)?;
    m.add_function(wrap_pyfunction!(extra_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_selftest, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
