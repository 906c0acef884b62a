//! Python bindings: fields, matrices, subspaces and representations, plus
//! the freeness, invariance, descent, N(T)-witness and suite runners.
//! Certificates and reports are returned as plain Python dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

use goodrep::constructions::{borel_group, sym_power, upper_triangular_rep};
use goodrep::descent::{DescentInput, GroupGaloisAction};
use goodrep::field::galois::GaloisExtension;
use goodrep::field::{Field, Scalar};
use goodrep::grouprep::{is_invariant, Representation};
use goodrep::io::{builtin_nt_module, parse_mode, parse_nt_module, parse_rep, rep_to_json};
use goodrep::linalg;
use goodrep::suite::{self, Certificate, Run};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn run_to_py<'py>(py: Python<'py>, command: &str, run: Run) -> PyResult<Bound<'py, PyAny>> {
    let cert = Certificate::from_run(vec![command.to_string()], run, std::time::Duration::ZERO);
    to_py(py, &serde_json::to_value(&cert).map_err(err)?)
}

/// A field: `Q`, `GF(p)`, `GF(p^n)`, `GF(p^n;modulus=[...])` or `Q(sqrt(d))`.
#[pyclass(name = "Field", frozen, from_py_object)]
#[derive(Clone)]
struct PyField(Field);

#[pymethods]
impl PyField {
    #[new]
    fn new(descriptor: &str) -> PyResult<Self> {
        Field::parse(descriptor).map(PyField).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Field({:?})", self.0.to_string())
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.0.characteristic()
    }

    #[getter]
    fn order(&self) -> Option<u64> {
        self.0.order()
    }

    /// All elements in code order (finite fields only).
    fn elements(&self) -> PyResult<Vec<String>> {
        let els = self.0.elements().ok_or_else(|| err("the field is infinite"))?;
        Ok(els.iter().map(|x| self.0.format(x)).collect())
    }

    fn add(&self, a: &str, b: &str) -> PyResult<String> {
        let (a, b) = (self.scalar(a)?, self.scalar(b)?);
        Ok(self.0.format(&self.0.add(&a, &b)))
    }

    fn mul(&self, a: &str, b: &str) -> PyResult<String> {
        let (a, b) = (self.scalar(a)?, self.scalar(b)?);
        Ok(self.0.format(&self.0.mul(&a, &b)))
    }

    fn inv(&self, a: &str) -> PyResult<String> {
        let a = self.scalar(a)?;
        Ok(self.0.format(&self.0.inv(&a).map_err(err)?))
    }

    fn pow(&self, a: &str, e: i64) -> PyResult<String> {
        let a = self.scalar(a)?;
        Ok(self.0.format(&self.0.pow(&a, e).map_err(err)?))
    }
}

impl PyField {
    fn scalar(&self, s: &str) -> PyResult<Scalar> {
        self.0.parse_scalar(s).map_err(err)
    }
}

/// Exact matrix over a field; entries are scalar strings.
#[pyclass(name = "Matrix", frozen, from_py_object)]
#[derive(Clone)]
struct PyMatrix(linalg::Matrix);

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(field: &PyField, rows: Vec<Vec<String>>) -> PyResult<Self> {
        linalg::Matrix::from_json_in(&field.0, &rows, None).map(PyMatrix).map_err(err)
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.rows(), self.0.cols())
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.0.to_json().rows
    }

    fn det(&self) -> PyResult<String> {
        Ok(self.0.field().format(&self.0.det().map_err(err)?))
    }

    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn inverse(&self) -> PyResult<PyMatrix> {
        self.0.inverse().map(PyMatrix).map_err(err)
    }

    fn __matmul__(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        self.0.mul(&other.0).map(PyMatrix).map_err(err)
    }

    fn __eq__(&self, other: &PyMatrix) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// Subspace given by spanning vectors.
#[pyclass(name = "Subspace", frozen, from_py_object)]
#[derive(Clone)]
struct PySubspace(linalg::Subspace);

#[pymethods]
impl PySubspace {
    #[new]
    fn new(field: &PyField, ambient: usize, vectors: Vec<Vec<String>>) -> PyResult<Self> {
        let vs = vectors
            .iter()
            .map(|v| v.iter().map(|s| field.scalar(s)).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        linalg::Subspace::from_vectors(&field.0, ambient, &vs).map(PySubspace).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn ambient(&self) -> usize {
        self.0.ambient()
    }

    fn contains(&self, v: Vec<String>) -> PyResult<bool> {
        let f = self.0.field();
        let v = v.iter().map(|s| f.parse_scalar(s)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        self.0.contains(&v).map_err(err)
    }

    fn basis(&self) -> Vec<Vec<String>> {
        self.0.basis().to_json().rows
    }

    fn __eq__(&self, other: &PySubspace) -> bool {
        self.0 == other.0
    }
}

/// Representation of a finite matrix group.
#[pyclass(name = "Representation", frozen, from_py_object)]
#[derive(Clone)]
struct PyRepresentation(Representation);

#[pymethods]
impl PyRepresentation {
    /// Parses the group/representation JSON format.
    #[staticmethod]
    #[pyo3(signature = (text, element_cap=None))]
    fn from_json(text: &str, element_cap: Option<usize>) -> PyResult<Self> {
        parse_rep(text, element_cap).map(PyRepresentation).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&rep_to_json(&self.0)).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField(self.0.field().clone())
    }

    fn group_order(&self) -> PyResult<usize> {
        self.0.group().order().map_err(err)
    }

    fn images(&self) -> Vec<PyMatrix> {
        self.0.images().iter().cloned().map(PyMatrix).collect()
    }

    fn is_invariant(&self, s: &PySubspace) -> PyResult<bool> {
        is_invariant(&self.0, &s.0).map_err(err)
    }

    fn direct_sum(&self, other: &PyRepresentation) -> PyResult<PyRepresentation> {
        self.0.direct_sum(&other.0).map(PyRepresentation).map_err(err)
    }
}

/// `B_n` acting by left multiplication on upper-triangular matrices, with
/// the family of diagonal-entry hyperplanes.
#[pyfunction]
fn upper_triangular(n: usize, field: &PyField) -> (PyRepresentation, Vec<PySubspace>) {
    let (rep, fam) = upper_triangular_rep(n, &field.0);
    (PyRepresentation(rep), fam.into_iter().map(PySubspace).collect())
}

/// `SL₂` on forms of degree `d`.
#[pyfunction]
fn sym_power_rep(field: &PyField, d: usize) -> PyRepresentation {
    PyRepresentation(sym_power(&field.0, d).rep)
}

fn family(subspaces: &[PySubspace]) -> Vec<linalg::Subspace> {
    subspaces.iter().map(|s| s.0.clone()).collect()
}

/// Set-theoretic freeness certificate; `mode` is `exhaustive` or `sample:<n>`.
#[pyfunction]
#[pyo3(signature = (rep, subspaces, mode="exhaustive", seed=1))]
fn verify_free<'py>(
    py: Python<'py>,
    rep: &PyRepresentation,
    subspaces: Vec<PySubspace>,
    mode: &str,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let mode = parse_mode(mode, seed).map_err(err)?;
    let run = suite::run_freeness(&rep.0, &family(&subspaces), mode).map_err(err)?;
    run_to_py(py, "verify-free", run)
}

#[pyfunction]
fn check_invariant<'py>(
    py: Python<'py>,
    rep: &PyRepresentation,
    subspaces: Vec<PySubspace>,
) -> PyResult<Bound<'py, PyAny>> {
    let run = suite::run_invariance(&rep.0, &family(&subspaces)).map_err(err)?;
    run_to_py(py, "check-invariant", run)
}

/// Non-properness certificate; `module` is `nt-blocks:...` or module JSON.
/// Without subspaces the family is `{0}`.
#[pyfunction]
#[pyo3(signature = (module, field="Q", subspaces=None, seed=1))]
fn nt_witness<'py>(
    py: Python<'py>,
    module: &str,
    field: &str,
    subspaces: Option<Vec<PySubspace>>,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let f = Field::parse(field).map_err(err)?;
    let m = match builtin_nt_module(module, &f) {
        Some(m) => m.map_err(err)?,
        None => parse_nt_module(module).map_err(err)?,
    };
    let fam = match subspaces {
        Some(s) => family(&s),
        None => vec![linalg::Subspace::zero(m.field(), m.dim())],
    };
    let run = suite::run_nt_witness(&m, &fam, seed).map_err(err)?;
    run_to_py(py, "nt-witness", run)
}

/// Descent certificate for `B_n` over the top field `ext`.
#[pyfunction]
#[pyo3(signature = (ext, n=2, samples=100, seed=1, mode="exhaustive"))]
fn descend<'py>(
    py: Python<'py>,
    ext: &str,
    n: usize,
    samples: usize,
    seed: u64,
    mode: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let top = Field::parse(ext).map_err(err)?;
    let galois = GaloisExtension::of(&top).map_err(err)?;
    let rep = Representation::natural(&borel_group(&top, n));
    let input = DescentInput::new(galois, rep, GroupGaloisAction::RationalPoints).map_err(err)?;
    let mode = parse_mode(mode, seed).map_err(err)?;
    let run = suite::run_descent(&input, samples, seed, mode).map_err(err)?;
    run_to_py(py, "descend", run)
}

/// Runs a bundled suite; returns `(all_matched, certificates)`.
#[pyfunction]
#[pyo3(signature = (name, seed=1))]
fn run_suite<'py>(py: Python<'py>, name: &str, seed: u64) -> PyResult<(bool, Vec<Bound<'py, PyAny>>)> {
    let cfg = suite::SuiteConfig { seed, ..Default::default() };
    let outcomes = suite::run_suite(name, &cfg, &["suite".to_string(), name.to_string()]).map_err(err)?;
    let matched = outcomes.iter().all(suite::ScenarioOutcome::matched);
    let certs = outcomes
        .iter()
        .map(|o| to_py(py, &serde_json::to_value(&o.certificate).map_err(err)?))
        .collect::<PyResult<Vec<_>>>()?;
    Ok((matched, certs))
}

#[pymodule]
fn goodrep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", suite::VERSION)?;
    m.add_class::<PyField>()?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PySubspace>()?;
    m.add_class::<PyRepresentation>()?;
    m.add_function(wrap_pyfunction!(upper_triangular, m)?)?;
    m.add_function(wrap_pyfunction!(sym_power_rep, m)?)?;
    m.add_function(wrap_pyfunction!(verify_free, m)?)?;
    m.add_function(wrap_pyfunction!(check_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(nt_witness, m)?)?;
    m.add_function(wrap_pyfunction!(descend, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
