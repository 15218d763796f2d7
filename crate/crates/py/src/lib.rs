//! Python bindings. Exact values cross the boundary as `fractions.Fraction`.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use bimop::config::{parse_point, RunConfig};
use bimop::index;
use bimop::kernel::kernel_eval;
use bimop::rational::parse_rational;
use bimop::verify::{parse_checks, run_checks, CheckKind, VerifyOptions};
use bimop::{Axis, Error, QMatrix, Rational};

create_exception!(bimop, BreakdownError, PyArithmeticError, "A leading principal minor of the moment matrix vanished.");
create_exception!(bimop, ConfigError, PyValueError, "The configuration or an argument is invalid.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Breakdown { index } => BreakdownError::new_err((e.to_string(), index)),
        Error::Config { .. } => ConfigError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn axis(k: usize) -> PyResult<Axis> {
    Axis::from_k(k).ok_or_else(|| PyValueError::new_err(format!("k must be 1 or 2, got {k}")))
}

fn fraction<'py>(py: Python<'py>, v: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((v.to_string(),))
}

fn fractions<'py>(py: Python<'py>, vs: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    vs.iter().map(|v| fraction(py, v)).collect()
}

fn matrix<'py>(py: Python<'py>, m: &QMatrix) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    (0..m.rows()).map(|r| fractions(py, m.row(r))).collect()
}

/// Accepts `int`, `Fraction` or a `"num/den"` string.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if obj.is_instance_of::<pyo3::types::PyFloat>() {
        return Err(PyValueError::new_err("floats are inexact; pass an int, Fraction or \"num/den\" string"));
    }
    parse_rational(&obj.str()?.to_cow()?).map_err(to_py)
}

fn block(r: usize) -> PyResult<usize> {
    if r == 0 {
        return Err(PyValueError::new_err("block size r must be positive"));
    }
    Ok(r)
}

fn point(obj: &Bound<'_, PyAny>) -> PyResult<(Rational, Rational)> {
    if let Ok(s) = obj.extract::<String>() {
        return parse_point(&s).map_err(to_py);
    }
    let (a, b): (Bound<'_, PyAny>, Bound<'_, PyAny>) = obj.extract()?;
    Ok((rational(&a)?, rational(&b)?))
}

#[pyfunction]
fn pos_of(i: usize, j: usize) -> PyResult<usize> {
    index::pos_of(i, j).map_err(to_py)
}

#[pyfunction]
fn pair_of(pos: usize) -> (usize, usize) {
    let g = index::pair_of(pos);
    (g.i, g.j)
}

#[pyfunction]
fn floor_f(x: &Bound<'_, PyAny>) -> PyResult<usize> {
    index::floor_f(&rational(x)?).map_err(to_py)
}

#[pyfunction]
fn n_plus(n: usize, r: usize, k: usize) -> PyResult<usize> {
    Ok(index::n_plus(n, block(r)?, axis(k)?))
}

#[pyfunction]
fn n_plus_inverse(n: usize, r: usize, k: usize) -> PyResult<Option<usize>> {
    Ok(index::n_plus_inverse(n, block(r)?, axis(k)?))
}

#[pyfunction]
fn in_complement_j(n: usize, r: usize, k: usize) -> PyResult<bool> {
    Ok(index::in_complement_j(n, block(r)?, axis(k)?))
}

#[pyfunction]
fn n_minus_big(n: usize, r: usize, k: usize) -> PyResult<usize> {
    Ok(index::n_minus_big(n, block(r)?, axis(k)?))
}

/// Factorization, families and recurrence matrices of one configuration.
#[pyclass(name = "Workspace", module = "bimop", frozen)]
struct PyWorkspace {
    inner: bimop::workspace::Workspace,
    seed: u64,
    checks: Option<Vec<CheckKind>>,
}

#[pymethods]
impl PyWorkspace {
    /// Builds from JSON config text; `depth` overrides the configured one.
    #[staticmethod]
    #[pyo3(signature = (text, depth = None))]
    fn from_json(text: &str, depth: Option<usize>) -> PyResult<Self> {
        let cfg = RunConfig::from_json(text).map_err(to_py)?;
        let depth = depth.unwrap_or(cfg.depth);
        let perturb = cfg.perturbations();
        let inner = bimop::workspace::Workspace::build_perturbed(cfg.measures, depth, &perturb).map_err(to_py)?;
        Ok(PyWorkspace { inner, seed: cfg.seed, checks: cfg.checks })
    }

    #[staticmethod]
    #[pyo3(signature = (path, depth = None))]
    fn from_config(path: std::path::PathBuf, depth: Option<usize>) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| ConfigError::new_err(format!("{}: {e}", path.display())))?;
        Self::from_json(&text, depth)
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.q()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth
    }

    #[getter]
    fn extended_depth(&self) -> usize {
        self.inner.extended_depth
    }

    /// `H_0 .. H_{depth-1}`.
    fn h<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &self.inner.factorization.h[..self.inner.depth])
    }

    fn s<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        matrix(py, &self.inner.factorization.s.leading(self.inner.depth))
    }

    fn sbar<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        matrix(py, &self.inner.factorization.sbar.leading(self.inner.depth))
    }

    /// Leading `depth x depth` window of `T_k`.
    fn t<'py>(&self, py: Python<'py>, k: usize) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        matrix(py, &self.inner.t(axis(k)?).map_err(to_py)?.data)
    }

    /// `K^[n](x, y)` as a `p x q` nested list; points are pairs or `"x1,x2"`.
    fn kernel<'py>(
        &self,
        py: Python<'py>,
        n: usize,
        x: &Bound<'py, PyAny>,
        y: &Bound<'py, PyAny>,
    ) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        if n >= self.inner.depth {
            return Err(PyValueError::new_err(format!("n must be below the depth {}", self.inner.depth)));
        }
        matrix(py, &kernel_eval(&self.inner.a, &self.inner.b, n, &point(x)?, &point(y)?))
    }

    /// Runs checks and returns their outcomes as a list of dicts.
    #[pyo3(signature = (checks = None, seed = None))]
    fn verify<'py>(&self, py: Python<'py>, checks: Option<&str>, seed: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
        let kinds = match checks {
            Some(list) => parse_checks(list).map_err(to_py)?,
            None => self.checks.clone().unwrap_or_else(|| CheckKind::ALL.to_vec()),
        };
        let opts = VerifyOptions { seed: seed.unwrap_or(self.seed), ..Default::default() };
        let outcomes = run_checks(&self.inner, &kinds, &opts);
        let text = serde_json::to_string(&outcomes).map_err(|e| PyValueError::new_err(e.to_string()))?;
        py.import("json")?.getattr("loads")?.call1((text,))
    }
}

#[pymodule(name = "bimop")]
fn pybimop(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BreakdownError", m.py().get_type::<BreakdownError>())?;
    m.add("ConfigError", m.py().get_type::<ConfigError>())?;
    m.add_function(wrap_pyfunction!(pos_of, m)?)?;
    m.add_function(wrap_pyfunction!(pair_of, m)?)?;
    m.add_function(wrap_pyfunction!(floor_f, m)?)?;
    m.add_function(wrap_pyfunction!(n_plus, m)?)?;
    m.add_function(wrap_pyfunction!(n_plus_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(in_complement_j, m)?)?;
    m.add_function(wrap_pyfunction!(n_minus_big, m)?)?;
    m.add_class::<PyWorkspace>()?;
    Ok(())
}
