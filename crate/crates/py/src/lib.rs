//! Python bindings: `import opkit`.
//!
//! Reports and summaries come back as plain dicts (the same JSON documents
//! the command line emits), rationals as `"p/q"` strings.

use std::str::FromStr;

use opkit_core::atoms::{symbolic_kato, AtomTree};
use opkit_core::format::{emit_certificate, emit_operator, emit_report, emit_structural, parse_certificate, parse_operator, Operator};
use opkit_core::gen::{gen_matrix, GenProfile};
use opkit_core::kato::{kato_decompose, verify_certificate, KatoCertificate};
use opkit_core::props::{registry, run_suite, SuiteConfig};
use opkit_core::{Rat, RatMatrix};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: opkit_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// An operator: a finite rational matrix or a symbolic atom tree.
#[pyclass(name = "Operator", module = "opkit", frozen)]
struct PyOperator {
    tree: AtomTree,
    op: Operator,
}

impl PyOperator {
    fn new(tree: AtomTree) -> PyResult<Self> {
        let op = Operator::from_tree(tree.clone()).map_err(value_error)?;
        Ok(PyOperator { tree, op })
    }

    fn finite(&self) -> PyResult<&RatMatrix> {
        match &self.op {
            Operator::Finite(m) => Ok(m),
            Operator::Symbolic(_) => Err(PyValueError::new_err("operator is not a finite matrix")),
        }
    }
}

#[pymethods]
impl PyOperator {
    /// Parses an operator document (see the command line's file format).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        PyOperator::new(parse_operator(text).map_err(value_error)?)
    }

    /// Square matrix from rows of ints, strings like `"3/4"`, or `Fraction`s.
    #[staticmethod]
    fn from_rows(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let rows = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| Rat::from_str(&x.str()?.to_cow()?).map_err(value_error))
                    .collect::<PyResult<Vec<_>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        let m = RatMatrix::from_rows(rows).map_err(value_error)?;
        PyOperator::new(AtomTree::Finite(m))
    }

    #[staticmethod]
    fn jordan(size: usize) -> PyResult<Self> {
        PyOperator::new(AtomTree::Finite(RatMatrix::jordan_block(size)))
    }

    /// Seeded random matrix of size at most `max_dim`.
    #[staticmethod]
    fn random(seed: u64, max_dim: usize) -> PyResult<Self> {
        let m = gen_matrix(&GenProfile::new(seed, max_dim)).map_err(value_error)?;
        PyOperator::new(AtomTree::Finite(m))
    }

    /// `"finite"` or `"symbolic"`.
    #[getter]
    fn model(&self) -> &'static str {
        self.op.model()
    }

    /// Matrix entries as strings (finite operators only).
    fn rows(&self) -> PyResult<Vec<Vec<String>>> {
        Ok(self
            .finite()?
            .to_rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect())
    }

    fn to_json(&self) -> String {
        emit_operator(&self.tree)
    }

    /// Full invariant report as a dict.
    fn analyze<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let report = self.op.report().map_err(value_error)?;
        json_to_py(py, &emit_report(&self.op, &report))
    }

    /// Kato decomposition certificate (finite operators only).
    fn decompose(&self) -> PyResult<PyCertificate> {
        let inner = kato_decompose(self.finite()?).map_err(value_error)?;
        Ok(PyCertificate { inner })
    }

    /// Structural `M ⊕ N` split of an atom tree, as a dict.
    fn structural_decomposition<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let k = symbolic_kato(&self.tree).map_err(value_error)?;
        json_to_py(py, &emit_structural(&k))
    }

    /// Re-checks `cert` against this operator; returns `{"passed", "failed", "checks"}`.
    fn verify<'py>(&self, py: Python<'py>, cert: &PyCertificate) -> PyResult<Bound<'py, PyAny>> {
        let report = verify_certificate(self.finite()?, &cert.inner);
        let doc = serde_json::json!({
            "passed": report.all_passed(),
            "failed": report.failed(),
            "checks": report.checks,
        });
        json_to_py(py, &doc.to_string())
    }

    fn __repr__(&self) -> String {
        match &self.op {
            Operator::Finite(m) => format!("Operator(finite, {}x{})", m.rows(), m.cols()),
            Operator::Symbolic(_) => "Operator(symbolic)".to_string(),
        }
    }
}

/// A claimed decomposition `Q^n = M ⊕ N`.
#[pyclass(name = "Certificate", module = "opkit", frozen)]
struct PyCertificate {
    inner: KatoCertificate,
}

fn basis_strings(s: &opkit_core::RatSubspace) -> Vec<Vec<String>> {
    s.basis()
        .iter()
        .map(|v| v.iter().map(ToString::to_string).collect())
        .collect()
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyCertificate {
            inner: parse_certificate(text).map_err(value_error)?,
        })
    }

    fn to_json(&self) -> String {
        emit_certificate(&self.inner)
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    #[getter]
    fn m_basis(&self) -> Vec<Vec<String>> {
        basis_strings(&self.inner.m_basis)
    }

    #[getter]
    fn n_basis(&self) -> Vec<Vec<String>> {
        basis_strings(&self.inner.n_basis)
    }

    fn __eq__(&self, other: &PyCertificate) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(dim M = {}, dim N = {}, d = {}, k = {})",
            self.inner.m_basis.dim(),
            self.inner.n_basis.dim(),
            self.inner.degree,
            self.inner.iterations
        )
    }
}

/// Runs the seeded property suite; returns the summary dict.
#[pyfunction]
#[pyo3(signature = (seed = 42, trials = 200, max_dim = 8))]
fn run_props<'py>(py: Python<'py>, seed: u64, trials: u64, max_dim: usize) -> PyResult<Bound<'py, PyAny>> {
    let cfg = SuiteConfig {
        seed,
        trials,
        max_dim,
    };
    let summary = py
        .detach(|| run_suite(&cfg, &registry()))
        .map_err(value_error)?;
    json_to_py(py, &serde_json::to_string(&summary).expect("summary serializes"))
}

#[pymodule]
fn opkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(run_props, m)?)?;
    Ok(())
}
