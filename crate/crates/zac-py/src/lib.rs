//! Python bindings for the zac analyzer: tree analysis, model
//! persistence, metrics, comparison, correlation and visualization.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use zac_core::lexer::{tokenize as lex, SourceText};
use zac_core::metrics::{
    compare as compare_rows, correlate_reports, count_characteristics, pearson as pearson_r,
    run_plan, GqmPlan, MetricsReport,
};
use zac_core::model::CodeModel;
use zac_core::store::{load_model, model_to_json, save_model};
use zac_core::viz::{bar_chart, inheritance_graph, namespace_graph, treemap, GraphMode};
use zac_core::{analyze_tree, AnalyzeOptions, Error};

fn to_py_err(error: Error) -> PyErr {
    match &error {
        Error::Io { .. } | Error::Write { .. } => PyIOError::new_err(error.to_string()),
        _ => PyValueError::new_err(error.to_string()),
    }
}

/// A semantic code model of one analyzed source tree.
#[pyclass(name = "Model")]
struct PyModel {
    inner: CodeModel,
}

#[pymethods]
impl PyModel {
    #[getter]
    fn artifact_count(&self) -> usize {
        self.inner.artifacts.len()
    }

    #[getter]
    fn namespace_count(&self) -> usize {
        self.inner.namespaces.len()
    }

    #[getter]
    fn class_count(&self) -> usize {
        self.inner.internal_classes().count()
    }

    #[getter]
    fn inheritance_edge_count(&self) -> usize {
        self.inner.inheritance_edges.len()
    }

    #[getter]
    fn include_edge_count(&self) -> usize {
        self.inner.include_edges.len()
    }

    /// The nine characteristic counts as a dict.
    fn characteristics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let counts = count_characteristics(&self.inner);
        let dict = PyDict::new(py);
        for name in zac_core::metrics::CHARACTERISTIC_NAMES {
            dict.set_item(name, counts.get(name).unwrap())?;
        }
        Ok(dict)
    }

    /// Artifact paths in id order.
    fn artifact_paths<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        PyList::new(py, self.inner.artifacts.iter().map(|a| a.path.as_str()))
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        save_model(&self.inner, &path).map_err(to_py_err)
    }

    fn to_json(&self) -> String {
        model_to_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(artifacts={}, namespaces={}, classes={})",
            self.inner.artifacts.len(),
            self.inner.namespaces.len(),
            self.inner.internal_classes().count()
        )
    }
}

/// A computed metrics report.
#[pyclass(name = "Report")]
struct PyReport {
    inner: MetricsReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn plan_name(&self) -> String {
        self.inner.plan_name.clone()
    }

    fn characteristics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let dict = PyDict::new(py);
        for (name, value) in self.inner.characteristics_in_order() {
            dict.set_item(name, value)?;
        }
        Ok(dict)
    }

    /// Measure name -> headline (sum) value.
    fn measures<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let dict = PyDict::new(py);
        for (name, value) in self.inner.measures_in_order() {
            dict.set_item(name, value.aggregate_sum)?;
        }
        Ok(dict)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(plan={:?}, characteristics={}, measures={})",
            self.inner.plan_name,
            self.inner.characteristics.len(),
            self.inner.traditional.len() + self.inner.product_line.len()
        )
    }
}

/// Analyze a source tree into a model.
#[pyfunction]
#[pyo3(signature = (root, exclude = Vec::new(), parallel = true))]
fn analyze(root: PathBuf, exclude: Vec<String>, parallel: bool) -> PyResult<PyModel> {
    let mut options = if parallel {
        AnalyzeOptions::parallel()
    } else {
        AnalyzeOptions::serial()
    };
    options.scan.exclude_globs = exclude;
    let result = analyze_tree(&root, &options).map_err(to_py_err)?;
    Ok(PyModel {
        inner: result.model,
    })
}

/// Load a model saved by `Model.save` or `zac analyze`.
#[pyfunction]
fn load(path: PathBuf) -> PyResult<PyModel> {
    Ok(PyModel {
        inner: load_model(&path).map_err(to_py_err)?,
    })
}

/// Compute metrics; uses the bundled default plan unless a plan path is
/// given.
#[pyfunction]
#[pyo3(signature = (model, plan_path = None))]
fn measure(model: &PyModel, plan_path: Option<PathBuf>) -> PyResult<PyReport> {
    let plan = match plan_path {
        Some(path) => GqmPlan::load(&path).map_err(to_py_err)?,
        None => GqmPlan::default_plan(),
    };
    let report = run_plan(&model.inner, &plan, "-").map_err(to_py_err)?;
    Ok(PyReport { inner: report })
}

/// Load a report JSON file written by `zac measure`.
#[pyfunction]
fn load_report(path: PathBuf) -> PyResult<PyReport> {
    Ok(PyReport {
        inner: MetricsReport::load(&path).map_err(to_py_err)?,
    })
}

/// Compare two reports; returns one dict per row.
#[pyfunction]
fn compare<'py>(
    py: Python<'py>,
    old: &PyReport,
    new: &PyReport,
) -> PyResult<Bound<'py, PyList>> {
    let rows = compare_rows(&old.inner, &new.inner).map_err(to_py_err)?;
    let out = PyList::empty(py);
    for row in rows {
        let dict = PyDict::new(py);
        dict.set_item("name", &row.name)?;
        dict.set_item("old", row.old_value)?;
        dict.set_item("new", row.new_value)?;
        dict.set_item("absolute_improvement", row.absolute_improvement)?;
        dict.set_item("relative_improvement_pct", row.relative_improvement_pct)?;
        dict.set_item("relative_rendered", row.relative_rendered())?;
        out.append(dict)?;
    }
    Ok(out)
}

/// Correlate the traditional and product-line measures of two reports;
/// returns (r, pairs) where pairs is a list of (label, traditional,
/// product_line) tuples.
#[pyfunction]
fn correlate<'py>(
    py: Python<'py>,
    old: &PyReport,
    new: &PyReport,
) -> PyResult<(f64, Bound<'py, PyList>)> {
    let result = correlate_reports(&old.inner, &new.inner).map_err(to_py_err)?;
    let pairs = PyList::empty(py);
    for pair in &result.pairs {
        pairs.append((pair.label.as_str(), pair.traditional, pair.product_line))?;
    }
    Ok((result.r, pairs))
}

/// Pearson product-moment correlation of two equal-length sequences.
#[pyfunction]
fn pearson(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<f64> {
    pearson_r(&xs, &ys).map_err(to_py_err)
}

/// Tokenize C++ text; returns (kind, lexeme, line, column) tuples.
#[pyfunction]
fn tokenize(text: &str) -> Vec<(String, String, u32, u32)> {
    let stream = lex(SourceText::new(
        Path::new("<python>"),
        text.as_bytes().to_vec(),
    ));
    stream
        .tokens()
        .iter()
        .map(|t| {
            (
                t.kind.name().to_string(),
                stream.lexeme_text(t).into_owned(),
                t.line,
                t.column,
            )
        })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (model, width = 1024.0, height = 768.0))]
fn treemap_svg(model: &PyModel, width: f64, height: f64) -> String {
    treemap(&model.inner, width, height)
}

#[pyfunction]
#[pyo3(signature = (model, width = 1024.0, height = 768.0))]
fn bar_chart_svg(model: &PyModel, width: f64, height: f64) -> String {
    bar_chart(&model.inner, width, height)
}

#[pyfunction]
fn namespace_graph_dot(model: &PyModel) -> String {
    namespace_graph(&model.inner)
}

/// Mode is "class_inheritance" (or "inheritance") or
/// "include_relationship" (or "includes").
#[pyfunction]
fn inheritance_graph_dot(model: &PyModel, mode: &str) -> PyResult<String> {
    let mode: GraphMode = mode.parse().map_err(to_py_err)?;
    Ok(inheritance_graph(&model.inner, mode))
}

/// Per-class values of one measure (CLD, DIT or NOC) keyed by qualified
/// class name; NIT, NOA and CIR return an empty dict (aggregate-only).
#[pyfunction]
fn per_class_values<'py>(
    py: Python<'py>,
    model: &PyModel,
    measure: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let value = zac_core::metrics::compute_measure(&model.inner, measure).map_err(to_py_err)?;
    let names: BTreeMap<u32, &str> = model
        .inner
        .classes
        .iter()
        .map(|c| (c.id, c.qualified_name.as_str()))
        .collect();
    let dict = PyDict::new(py);
    for (id, v) in &value.per_entity {
        dict.set_item(names[id], v)?;
    }
    Ok(dict)
}

#[pymodule]
fn zac_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(load, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(load_report, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(correlate, m)?)?;
    m.add_function(wrap_pyfunction!(pearson, m)?)?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(treemap_svg, m)?)?;
    m.add_function(wrap_pyfunction!(bar_chart_svg, m)?)?;
    m.add_function(wrap_pyfunction!(namespace_graph_dot, m)?)?;
    m.add_function(wrap_pyfunction!(inheritance_graph_dot, m)?)?;
    m.add_function(wrap_pyfunction!(per_class_values, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
