//! Python module `pq_orient`.
//!
//! Bounds are passed as two lists `lower` and `upper`. Orientations come
//! back as lists of directed pairs in edge order, factors as sorted lists of
//! edge ids. A certified infeasible instance returns `None`; every other
//! error raises `ValueError`.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pq::boundary::{orient_boundary as boundary_run, orient_corollary as corollary_run, BoundaryOptions};
use pq::bounds::{BoundsRole, DegreeBounds};
use pq::error::Error;
use pq::factor::{factor_boundary_with, factor_gf_with, near_half_factor as half_factor, Factor};
use pq::feasibility::{self, SubsetVerdict};
use pq::generate::{self, Regime, RunConfig};
use pq::graph::{Bipartition, Orientation, Side};
use pq::verify::Claim;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// `Ok(None)` for a certified negative answer.
fn optional<T>(r: Result<T, Error>) -> PyResult<Option<T>> {
    match r {
        Ok(t) => Ok(Some(t)),
        Err(Error::Infeasible) => Ok(None),
        Err(e) => Err(py_err(e)),
    }
}

#[pyclass(name = "Graph", module = "pq_orient", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: Arc<pq::graph::Graph>,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = pq::graph::Graph::new(n, edges).map_err(py_err)?;
        Ok(PyGraph { inner: Arc::new(inner) })
    }

    /// Parses the text graph format (an optional bounds section is ignored).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let (g, _) = pq::io::parse_instance(text, BoundsRole::Factor).map_err(py_err)?;
        Ok(PyGraph { inner: Arc::new(g) })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        if v >= self.inner.vertex_count() {
            return Err(py_err(Error::VertexOutOfRange {
                vertex: v,
                n: self.inner.vertex_count(),
            }));
        }
        Ok(self.inner.degree(v))
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    fn to_text(&self) -> String {
        pq::io::emit_graph(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.vertex_count(), self.inner.edge_count())
    }
}

fn bounds(g: &PyGraph, lower: Vec<usize>, upper: Vec<usize>, role: BoundsRole) -> PyResult<DegreeBounds> {
    let n = g.inner.vertex_count();
    if lower.len() != n || upper.len() != n {
        return Err(py_err(Error::LengthMismatch {
            expected: n,
            actual: lower.len().max(upper.len()),
        }));
    }
    DegreeBounds::new(lower, upper, role).map_err(py_err)
}

fn pairs(d: &Orientation<'_>) -> Vec<(usize, usize)> {
    d.directed_pairs()
}

fn edge_ids(f: &Factor<'_>) -> Vec<usize> {
    f.edges().collect()
}

fn sides(g: &PyGraph, swap_sides: bool) -> PyResult<Bipartition> {
    let part = g.inner.bipartition().map_err(py_err)?;
    Ok(if swap_sides { part.swapped() } else { part })
}

/// A `(p, q)`-orientation or `None`.
#[pyfunction]
fn orient_pq(graph: &PyGraph, lower: Vec<usize>, upper: Vec<usize>) -> PyResult<Option<Vec<(usize, usize)>>> {
    let b = bounds(graph, lower, upper, BoundsRole::Orientation)?;
    Ok(optional(feasibility::orient_pq(&graph.inner, &b))?.map(|d| pairs(&d)))
}

/// An orientation with every out-degree in `{p, p+1, q-1, q}`, or `None`.
#[pyfunction]
#[pyo3(signature = (graph, lower, upper, force = false))]
fn orient_boundary(
    graph: &PyGraph,
    lower: Vec<usize>,
    upper: Vec<usize>,
    force: bool,
) -> PyResult<Option<Vec<(usize, usize)>>> {
    let b = bounds(graph, lower, upper, BoundsRole::Orientation)?;
    let opts = BoundaryOptions {
        force,
        ..Default::default()
    };
    Ok(optional(boundary_run(&graph.inner, &b, opts))?.map(|r| pairs(&r.orientation)))
}

#[pyfunction]
fn orient_corollary(graph: &PyGraph, lower: Vec<usize>, upper: Vec<usize>) -> PyResult<Vec<(usize, usize)>> {
    let b = bounds(graph, lower, upper, BoundsRole::Orientation)?;
    let run = corollary_run(&graph.inner, &b, BoundaryOptions::default()).map_err(py_err)?;
    Ok(pairs(&run.orientation))
}

#[pyfunction]
fn balanced_orientation(graph: &PyGraph) -> Vec<(usize, usize)> {
    pairs(&feasibility::balanced_orientation(&graph.inner))
}

/// `None` when the subset condition holds, else the first violating set.
#[pyfunction]
#[pyo3(signature = (graph, lower, upper, cap = feasibility::DEFAULT_EXHAUSTIVE_CAP))]
fn frank_gyarfas_check(
    graph: &PyGraph,
    lower: Vec<usize>,
    upper: Vec<usize>,
    cap: usize,
) -> PyResult<Option<Vec<usize>>> {
    let b = bounds(graph, lower, upper, BoundsRole::Orientation)?;
    match feasibility::frank_gyarfas_check(&graph.inner, &b, cap).map_err(py_err)? {
        SubsetVerdict::Feasible => Ok(None),
        SubsetVerdict::Violating(s) => Ok(Some(s.to_vec())),
    }
}

/// A `(g, f)`-factor as edge ids, or `None`.
#[pyfunction]
#[pyo3(signature = (graph, lower, upper, swap_sides = false))]
fn factor_gf(
    graph: &PyGraph,
    lower: Vec<usize>,
    upper: Vec<usize>,
    swap_sides: bool,
) -> PyResult<Option<Vec<usize>>> {
    let b = bounds(graph, lower, upper, BoundsRole::Factor)?;
    let part = sides(graph, swap_sides)?;
    Ok(optional(factor_gf_with(&graph.inner, &part, &b))?.map(|f| edge_ids(&f)))
}

#[pyfunction]
#[pyo3(signature = (graph, lower, upper, swap_sides = false, force = false))]
fn factor_boundary(
    graph: &PyGraph,
    lower: Vec<usize>,
    upper: Vec<usize>,
    swap_sides: bool,
    force: bool,
) -> PyResult<Option<Vec<usize>>> {
    let b = bounds(graph, lower, upper, BoundsRole::Factor)?;
    let part = sides(graph, swap_sides)?;
    let opts = BoundaryOptions {
        force,
        ..Default::default()
    };
    Ok(optional(factor_boundary_with(&graph.inner, &part, &b, opts))?.map(|r| edge_ids(&r.factor)))
}

#[pyfunction]
fn near_half_factor(graph: &PyGraph) -> PyResult<Vec<usize>> {
    let f = half_factor(&graph.inner).map_err(py_err)?;
    Ok(edge_ids(&f))
}

/// Side labels, 0 for X and 1 for Y.
#[pyfunction]
fn bipartition(graph: &PyGraph) -> PyResult<Vec<usize>> {
    let part = graph.inner.bipartition().map_err(py_err)?;
    Ok(part
        .sides()
        .iter()
        .map(|s| match s {
            Side::X => 0,
            Side::Y => 1,
        })
        .collect())
}

/// `(graph, lower, upper)` for a seeded instance.
#[pyfunction]
#[pyo3(signature = (n, prob, regime = "theorem", seed = 0))]
fn generate_instance(n: usize, prob: f64, regime: &str, seed: u64) -> PyResult<(PyGraph, Vec<usize>, Vec<usize>)> {
    let regime = match regime {
        "theorem" => Regime::Theorem,
        "corollary" => Regime::Corollary,
        "factor" => Regime::Factor,
        other => return Err(PyValueError::new_err(format!("unknown regime {other:?}"))),
    };
    let inst = generate::generate_instance(&RunConfig::with_seed(seed), n, prob, regime).map_err(py_err)?;
    let (lower, upper) = (inst.bounds.lowers().to_vec(), inst.bounds.uppers().to_vec());
    Ok((PyGraph { inner: Arc::new(inst.graph) }, lower, upper))
}

/// Checks a result in the text format. Returns a dict with `pass`,
/// `degrees` and `violations` (a list of `(vertex, degree)`).
#[pyfunction]
#[pyo3(signature = (graph, result, claim, lower = None, upper = None))]
fn verify<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    result: &str,
    claim: &str,
    lower: Option<Vec<usize>>,
    upper: Option<Vec<usize>>,
) -> PyResult<Bound<'py, PyDict>> {
    let claim: Claim = claim.parse().map_err(PyValueError::new_err)?;
    let role = if claim.is_factor_claim() {
        BoundsRole::Factor
    } else {
        BoundsRole::Orientation
    };
    let b = match (lower, upper) {
        (Some(lo), Some(hi)) => Some(DegreeBounds::new(lo, hi, role).map_err(py_err)?),
        (None, None) => None,
        _ => return Err(PyValueError::new_err("pass both lower and upper, or neither")),
    };
    let report = pq::verify::verify(&graph.inner, b.as_ref(), result, claim).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("pass", report.pass)?;
    out.set_item("degrees", report.degrees)?;
    let violations: Vec<(usize, usize)> = report.violations.iter().map(|v| (v.vertex, v.degree)).collect();
    out.set_item("violations", violations)?;
    Ok(out)
}

#[pymodule]
fn pq_orient(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(orient_pq, m)?)?;
    m.add_function(wrap_pyfunction!(orient_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(orient_corollary, m)?)?;
    m.add_function(wrap_pyfunction!(balanced_orientation, m)?)?;
    m.add_function(wrap_pyfunction!(frank_gyarfas_check, m)?)?;
    m.add_function(wrap_pyfunction!(factor_gf, m)?)?;
    m.add_function(wrap_pyfunction!(factor_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(near_half_factor, m)?)?;
    m.add_function(wrap_pyfunction!(bipartition, m)?)?;
    m.add_function(wrap_pyfunction!(generate_instance, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
