//! Python bindings: grammars, lexica, compilation, enumeration and verification.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

use mgforge::cfg::{enumerate_cfg_language, is_category_recursion_free, is_recursion_free, CfgBounds};
use mgforge::mg::{enumerate_mg_language, MgBounds};
use mgforge::verify::lexicon_stats;

create_exception!(mgforge_py, BudgetExceeded, PyException, "An enumeration ran out of budget.");

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converts through the `json` module so Python gets plain dicts and lists.
fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

#[pyclass(name = "Grammar", module = "mgforge_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGrammar(mgforge::Grammar);

#[pymethods]
impl PyGrammar {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        mgforge::parse_cfg(text).map(Self).map_err(value_err)
    }

    /// Loads one of the bundled example grammars.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        let src = mgforge::corpus::fixture_source(name)
            .ok_or_else(|| PyValueError::new_err(format!("no fixture `{name}`")))?;
        Self::new(src)
    }

    #[staticmethod]
    fn fixtures() -> Vec<&'static str> {
        mgforge::corpus::FIXTURES.iter().map(|(n, _)| *n).collect()
    }

    #[getter]
    fn start(&self) -> String {
        self.0.start().to_string()
    }

    #[getter]
    fn rules(&self) -> Vec<String> {
        self.0.rules().iter().map(|r| r.to_string()).collect()
    }

    fn render(&self) -> String {
        self.0.render()
    }

    fn digest(&self) -> String {
        self.0.digest()
    }

    fn is_recursion_free(&self) -> bool {
        is_recursion_free(&self.0)
    }

    fn is_category_recursion_free(&self) -> bool {
        is_category_recursion_free(&self.0)
    }

    /// Strings of the grammar. Recursive grammars need `max_len`.
    #[pyo3(signature = (max_len=None, max_steps=None))]
    fn language(&self, max_len: Option<usize>, max_steps: Option<usize>) -> PyResult<Vec<String>> {
        let bounds = CfgBounds {
            max_len,
            max_steps,
            ..CfgBounds::unbounded()
        };
        enumerate_cfg_language(&self.0, bounds)
            .map(|l| l.into_iter().collect())
            .map_err(|e| BudgetExceeded::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!("<Grammar start={} rules={}>", self.0.start(), self.0.rules().len())
    }
}

#[pyclass(name = "Lexicon", module = "mgforge_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLexicon(mgforge::MgLexicon);

#[pymethods]
impl PyLexicon {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        mgforge::MgLexicon::parse(text).map(Self).map_err(value_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(value_err)?;
        mgforge::MgLexicon::from_json(&v).map(Self).map_err(value_err)
    }

    #[getter]
    fn items(&self) -> Vec<String> {
        self.0.items.iter().map(|i| i.render()).collect()
    }

    #[getter]
    fn final_category(&self) -> String {
        self.0.final_category.name().to_string()
    }

    fn render(&self) -> String {
        self.0.render()
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    /// Strings of the lexicon, shortest first.
    #[pyo3(signature = (max_len=None, max_items=MgBounds::DEFAULT_MAX_ITEMS))]
    fn enumerate(&self, py: Python<'_>, max_len: Option<usize>, max_items: usize) -> PyResult<Vec<String>> {
        let bounds = MgBounds {
            max_items,
            max_len,
            target: None,
        };
        let lang = py
            .detach(|| enumerate_mg_language(&self.0, &bounds))
            .map_err(|e| BudgetExceeded::new_err(e.to_string()))?;
        Ok(lang.by_length().into_iter().map(String::from).collect())
    }

    /// The rendered derivation tree of `target`, or `None`.
    #[pyo3(signature = (target, max_items=MgBounds::DEFAULT_MAX_ITEMS))]
    fn derive(&self, py: Python<'_>, target: &str, max_items: usize) -> PyResult<Option<String>> {
        let tree = py
            .detach(|| mgforge::mg::derive(&self.0, target, max_items))
            .map_err(|e| BudgetExceeded::new_err(e.to_string()))?;
        Ok(tree.map(|t| t.render()))
    }

    /// Operation labels of the derivation of `target`, leaves excluded.
    #[pyo3(signature = (target, max_items=MgBounds::DEFAULT_MAX_ITEMS))]
    fn operations(&self, target: &str, max_items: usize) -> PyResult<Option<Vec<&'static str>>> {
        let tree = mgforge::mg::derive(&self.0, target, max_items)
            .map_err(|e| BudgetExceeded::new_err(e.to_string()))?;
        Ok(tree.map(|t| t.operations().into_iter().map(|o| o.label()).collect()))
    }

    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serde_json::to_value(lexicon_stats(&self.0)).map_err(value_err)?)
    }

    fn __len__(&self) -> usize {
        self.0.items.len()
    }

    fn __repr__(&self) -> String {
        format!("<Lexicon final={} items={}>", self.0.final_category.name(), self.0.items.len())
    }
}

#[pyclass(name = "Compilation", module = "mgforge_py", frozen, skip_from_py_object)]
struct PyCompilation {
    #[pyo3(get)]
    lexicon: Py<PyLexicon>,
    report: serde_json::Value,
    #[pyo3(get)]
    warnings: Vec<String>,
}

#[pymethods]
impl PyCompilation {
    #[getter]
    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.report)
    }
}

/// Runs the whole pipeline on `grammar`.
#[pyfunction]
fn compile(py: Python<'_>, grammar: &PyGrammar) -> PyResult<PyCompilation> {
    let c = mgforge::compile(&grammar.0).map_err(value_err)?;
    Ok(PyCompilation {
        lexicon: Py::new(py, PyLexicon(c.lexicon))?,
        report: c.report.to_json(),
        warnings: c.report.warnings,
    })
}

/// Compares the languages of `grammar` and `lexicon` (compiled when omitted).
/// Returns the report as a dict with a `verdict` key.
#[pyfunction]
#[pyo3(signature = (grammar, lexicon=None, max_len=64, max_items=MgBounds::DEFAULT_MAX_ITEMS, max_steps=10_000))]
fn verify<'py>(
    py: Python<'py>,
    grammar: &PyGrammar,
    lexicon: Option<&PyLexicon>,
    max_len: usize,
    max_items: usize,
    max_steps: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let lex = match lexicon {
        Some(l) => l.0.clone(),
        None => mgforge::compile(&grammar.0).map_err(value_err)?.lexicon,
    };
    let bounds = mgforge::VerifyBounds {
        max_len,
        max_items,
        max_steps,
        ..Default::default()
    };
    let g = &grammar.0;
    let report = py
        .detach(|| mgforge::compare_languages(g, &lex, bounds))
        .map_err(value_err)?;
    to_py(py, &report.to_json())
}

#[pymodule]
fn mgforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrammar>()?;
    m.add_class::<PyLexicon>()?;
    m.add_class::<PyCompilation>()?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    Ok(())
}
