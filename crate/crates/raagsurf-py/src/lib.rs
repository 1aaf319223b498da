//! Python bindings: graphs, the classifier, the elimination pipeline and the
//! certificate checker.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use raagsurf_core::certcheck::{bundled_certificates, CertMode, CertReport, Certificate};
use raagsurf_core::ops;
use raagsurf_core::patterns::{builtin_catalog, ForbiddenCatalog};
use raagsurf_core::pipeline;
use raagsurf_core::reduction::{Classification, Engine as CoreEngine, EngineConfig, StarReading};
use raagsurf_core::{canonical_code, enumerate_codes, SmallGraph, VertexSet};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn catalog() -> PyResult<ForbiddenCatalog> {
    builtin_catalog().map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

fn to_set(g: &SmallGraph, items: &[usize]) -> PyResult<VertexSet> {
    match items.iter().find(|&&v| v >= g.n()) {
        Some(v) => Err(PyValueError::new_err(format!("vertex {v} out of range"))),
        None => Ok(items.iter().copied().collect()),
    }
}

fn from_set(s: VertexSet) -> Vec<usize> {
    s.iter().collect()
}

/// A simple undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "raagsurf", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: SmallGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        if n > raagsurf_core::graph::MAX_VERTICES {
            return Err(PyValueError::new_err("too many vertices"));
        }
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n || a == b) {
            return Err(PyValueError::new_err(format!("bad edge ({a}, {b})")));
        }
        Ok(PyGraph {
            inner: SmallGraph::from_edges(n, &edges),
        })
    }

    #[staticmethod]
    fn from_graph6(text: &str) -> PyResult<Self> {
        SmallGraph::from_graph6(text.trim())
            .map(|inner| PyGraph { inner })
            .map_err(value_err)
    }

    #[staticmethod]
    fn cycle(n: usize) -> Self {
        PyGraph {
            inner: SmallGraph::cycle(n),
        }
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        PyGraph {
            inner: SmallGraph::path(n),
        }
    }

    fn to_graph6(&self) -> String {
        self.inner.to_graph6()
    }

    /// Canonical graph6 code, equal for isomorphic graphs.
    fn canonical(&self) -> PyResult<String> {
        canonical_code(&self.inner)
            .map(|c| c.to_string())
            .map_err(value_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.inner.n() && b < self.inner.n() && self.inner.has_edge(a, b)
    }

    fn link(&self, v: usize) -> PyResult<Vec<usize>> {
        to_set(&self.inner, &[v])?;
        Ok(from_set(self.inner.link(v)))
    }

    fn complement(&self) -> Self {
        PyGraph {
            inner: self.inner.complement(),
        }
    }

    fn induced(&self, vertices: Vec<usize>) -> PyResult<Self> {
        let s = to_set(&self.inner, &vertices)?;
        Ok(PyGraph {
            inner: self.inner.induced(s),
        })
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn is_isomorphic(&self, other: &PyGraph) -> PyResult<bool> {
        raagsurf_core::is_isomorphic(&self.inner, &other.inner).map_err(value_err)
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __eq__(&self, other: &PyGraph) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Graph.from_graph6({:?})", self.inner.to_graph6())
    }
}

fn graph_arg(obj: &Bound<'_, PyAny>) -> PyResult<SmallGraph> {
    if let Ok(g) = obj.cast::<PyGraph>() {
        return Ok(g.get().inner.clone());
    }
    let text: String = obj.extract()?;
    SmallGraph::from_graph6(text.trim()).map_err(value_err)
}

/// A classification verdict with its justification.
#[pyclass(name = "Classification", module = "raagsurf", frozen, get_all)]
struct PyClassification {
    /// "FORBIDDEN", "EXCLUDED" or "IRREDUCIBLE".
    verdict: String,
    /// Forbidden pattern name, if any.
    pattern: Option<String>,
    /// Image of the pattern's vertices in the canonical graph.
    embedding: Option<Vec<usize>>,
    /// The move that excluded the graph, if any.
    move_id: Option<String>,
    /// Its instantiation, as written in traces.
    params: Option<String>,
    /// Canonical codes the move deferred to.
    derived: Vec<String>,
}

#[pymethods]
impl PyClassification {
    fn __repr__(&self) -> String {
        match (&self.pattern, &self.move_id) {
            (Some(p), _) => format!("<{} {p}>", self.verdict),
            (_, Some(m)) => format!(
                "<{} {m} {}>",
                self.verdict,
                self.params.clone().unwrap_or_default()
            ),
            _ => format!("<{}>", self.verdict),
        }
    }
}

impl From<&Classification> for PyClassification {
    fn from(c: &Classification) -> Self {
        let mut out = PyClassification {
            verdict: c.verdict().to_string(),
            pattern: None,
            embedding: None,
            move_id: None,
            params: None,
            derived: Vec::new(),
        };
        match c {
            Classification::Forbidden(p, e) => {
                out.pattern = Some(p.to_string());
                out.embedding = Some(e.map.clone());
            }
            Classification::Excluded(t) => {
                if let Some(s) = t.steps.first() {
                    out.move_id = Some(s.mv.to_string());
                    out.params = Some(s.params.to_string());
                    out.derived = s.derived.iter().map(|d| d.to_string()).collect();
                }
            }
            Classification::Irreducible => {}
        }
        out
    }
}

/// The classifier with its memoised exclusion database.
#[pyclass(name = "Engine", module = "raagsurf", frozen)]
struct PyEngine {
    inner: CoreEngine,
}

#[pymethods]
impl PyEngine {
    #[new]
    #[pyo3(signature = (star = "core-complement", extended = false, strict_deletions = false))]
    fn new(star: &str, extended: bool, strict_deletions: bool) -> PyResult<Self> {
        let star_reading = match star {
            "core-complement" | "centre-complement" => StarReading::CentreComplement,
            "set-complement" => StarReading::SetComplement,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown star reading {other:?}"
                )))
            }
        };
        let config = EngineConfig {
            star_reading,
            extended,
            strict_deletions,
            ..EngineConfig::default()
        };
        Ok(PyEngine {
            inner: CoreEngine::new(catalog()?, config),
        })
    }

    #[getter]
    fn fingerprint(&self) -> String {
        self.inner.config.fingerprint()
    }

    /// Accepts a `Graph` or a graph6 string.
    fn classify(&self, py: Python<'_>, graph: &Bound<'_, PyAny>) -> PyResult<PyClassification> {
        let g = graph_arg(graph)?;
        let code = canonical_code(&g).map_err(value_err)?;
        let c = py.detach(|| self.inner.classify_code(&code));
        Ok(PyClassification::from(&c))
    }

    fn is_excluded(&self, py: Python<'_>, graph: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.classify(py, graph)?.verdict == "EXCLUDED")
    }

    /// Survivor counts after each step and the text report.
    #[pyo3(signature = (n, steps = 8))]
    fn pipeline(&self, py: Python<'_>, n: usize, steps: usize) -> PyResult<(Vec<usize>, String)> {
        if n > raagsurf_core::graph::CANON_LIMIT {
            return Err(PyValueError::new_err(
                "n exceeds the canonical labelling limit",
            ));
        }
        let r = py.detach(|| pipeline::run_elimination(&self.inner, n, steps));
        Ok((r.counts(), r.to_text()))
    }

    /// Failing clause names per catalog member; empty lists mean the member passed.
    fn verify_catalog(&self, py: Python<'_>) -> Vec<(String, Vec<String>)> {
        py.detach(|| pipeline::verify_catalog(&self.inner))
            .into_iter()
            .map(|c| {
                let failed = c
                    .clauses
                    .into_iter()
                    .filter(|(_, ok)| !ok)
                    .map(|(s, _)| s)
                    .collect();
                (c.pattern.to_string(), failed)
            })
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.db.len()
    }
}

/// Outcome of checking one certificate.
#[pyclass(name = "CertReport", module = "raagsurf", frozen, get_all)]
struct PyCertReport {
    name: String,
    mode: String,
    passed: bool,
    paths: usize,
    failing: usize,
    /// First uncovered anti-path and its Θ∖X, in the file's labels.
    failure: Option<String>,
    warnings: Vec<String>,
}

#[pymethods]
impl PyCertReport {
    fn __repr__(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!(
            "<CertReport {tag} {} {}/{}>",
            self.name,
            self.paths - self.failing,
            self.paths
        )
    }
}

fn report(cert: &Certificate, r: CertReport) -> PyCertReport {
    PyCertReport {
        failure: cert.describe_failure(&r),
        passed: r.passes(),
        name: r.name,
        mode: r.mode.to_string(),
        paths: r.paths,
        failing: r.failing,
        warnings: r.warnings,
    }
}

fn cert_mode(mode: Option<&str>) -> PyResult<Option<CertMode>> {
    match mode {
        None => Ok(None),
        Some("conservative") => Ok(Some(CertMode::Conservative)),
        Some("extension") => Ok(Some(CertMode::Extension)),
        Some(other) => Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    }
}

/// Checks certificate text; `mode` overrides the file's MODE line.
#[pyfunction]
#[pyo3(signature = (text, mode = None))]
fn check_certificate(text: &str, mode: Option<&str>) -> PyResult<PyCertReport> {
    let cert = Certificate::parse(text).map_err(value_err)?;
    let mode = cert_mode(mode)?.unwrap_or(cert.mode);
    let r = cert.check_with(mode).map_err(value_err)?;
    Ok(report(&cert, r))
}

#[pyfunction]
#[pyo3(signature = (mode = None))]
fn check_bundled(mode: Option<&str>) -> PyResult<Vec<PyCertReport>> {
    let mode = cert_mode(mode)?;
    bundled_certificates()
        .map_err(value_err)?
        .iter()
        .map(|c| {
            let r = c.check_with(mode.unwrap_or(c.mode)).map_err(value_err)?;
            Ok(report(c, r))
        })
        .collect()
}

/// Canonical graph6 codes of every graph on `n` vertices.
#[pyfunction]
fn enumerate(py: Python<'_>, n: usize) -> PyResult<Vec<String>> {
    if n > raagsurf_core::graph::CANON_LIMIT {
        return Err(PyValueError::new_err(
            "n exceeds the canonical labelling limit",
        ));
    }
    Ok(py
        .detach(|| enumerate_codes(n))
        .iter()
        .map(|c| c.to_string())
        .collect())
}

/// `(n, checked, counterexamples)` per vertex count.
#[pyfunction]
fn verify_thcw(py: Python<'_>, max_n: usize) -> PyResult<Vec<(usize, usize, Vec<String>)>> {
    let cat = catalog()?;
    Ok(lines(py.detach(|| {
        pipeline::verify_thcw(&cat, max_n.min(raagsurf_core::graph::CANON_LIMIT))
    })))
}

#[pyfunction]
fn verify_skew(py: Python<'_>, max_n: usize) -> PyResult<Vec<(usize, usize, Vec<String>)>> {
    let cat = catalog()?;
    Ok(lines(py.detach(|| {
        pipeline::verify_skew(&cat, max_n.min(raagsurf_core::graph::CANON_LIMIT))
    })))
}

fn lines(v: Vec<pipeline::VerifyLine>) -> Vec<(usize, usize, Vec<String>)> {
    v.into_iter()
        .map(|l| {
            (
                l.n,
                l.checked,
                l.counterexamples.iter().map(|c| c.to_string()).collect(),
            )
        })
        .collect()
}

#[pyfunction]
fn double_along(g: &PyGraph, clique: Vec<usize>) -> PyResult<PyGraph> {
    let l = to_set(&g.inner, &clique)?;
    ops::double_along(&g.inner, l)
        .map(|inner| PyGraph { inner })
        .map_err(value_err)
}

#[pyfunction]
fn central_extension(g: &PyGraph, clique: Vec<usize>) -> PyResult<PyGraph> {
    let l = to_set(&g.inner, &clique)?;
    ops::central_extension(&g.inner, l)
        .map(|inner| PyGraph { inner })
        .map_err(value_err)
}

#[pyfunction]
fn cocontract(g: &PyGraph, u: usize, v: usize) -> PyResult<PyGraph> {
    to_set(&g.inner, &[u, v])?;
    ops::cocontract(&g.inner, u, v)
        .map(|inner| PyGraph { inner })
        .map_err(value_err)
}

#[pyfunction]
fn set_commutator(g: &PyGraph, u: Vec<usize>, v: Vec<usize>) -> PyResult<Vec<usize>> {
    let (u, v) = (to_set(&g.inner, &u)?, to_set(&g.inner, &v)?);
    Ok(from_set(ops::set_commutator(&g.inner, u, v)))
}

/// A witnessing ordering, or None.
#[pyfunction]
#[pyo3(signature = (g, vertices, relative = Vec::new()))]
fn nuclear_ordering(
    g: &PyGraph,
    vertices: Vec<usize>,
    relative: Vec<Vec<usize>>,
) -> PyResult<Option<Vec<usize>>> {
    let x = to_set(&g.inner, &vertices)?;
    let ys = relative
        .iter()
        .map(|y| to_set(&g.inner, y))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(ops::nuclear_within(&g.inner, g.inner.vertices(), x, &ys).map(|w| w.ordering))
}

#[pyfunction]
#[pyo3(signature = (g, vertices, relative = Vec::new()))]
fn is_dense(g: &PyGraph, vertices: Vec<usize>, relative: Vec<Vec<usize>>) -> PyResult<bool> {
    let x = to_set(&g.inner, &vertices)?;
    let ys = relative
        .iter()
        .map(|y| to_set(&g.inner, y))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(ops::dense_within(&g.inner, g.inner.vertices(), x, &ys).is_some())
}

#[pyfunction]
fn thcw_predicate(g: &PyGraph) -> bool {
    ops::thcw_predicate(&g.inner)
}

/// `(A, B)` with `G[A]` disconnected and the complement of `G[B]` disconnected, or None.
#[pyfunction]
fn skew_partition(g: &PyGraph) -> Option<(Vec<usize>, Vec<usize>)> {
    ops::skew_partition(&g.inner).map(|(a, b)| (from_set(a), from_set(b)))
}

#[pymodule]
fn raagsurf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyEngine>()?;
    m.add_class::<PyClassification>()?;
    m.add_class::<PyCertReport>()?;
    m.add_function(wrap_pyfunction!(check_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(check_bundled, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_thcw, m)?)?;
    m.add_function(wrap_pyfunction!(verify_skew, m)?)?;
    m.add_function(wrap_pyfunction!(double_along, m)?)?;
    m.add_function(wrap_pyfunction!(central_extension, m)?)?;
    m.add_function(wrap_pyfunction!(cocontract, m)?)?;
    m.add_function(wrap_pyfunction!(set_commutator, m)?)?;
    m.add_function(wrap_pyfunction!(nuclear_ordering, m)?)?;
    m.add_function(wrap_pyfunction!(is_dense, m)?)?;
    m.add_function(wrap_pyfunction!(thcw_predicate, m)?)?;
    m.add_function(wrap_pyfunction!(skew_partition, m)?)?;
    Ok(())
}
