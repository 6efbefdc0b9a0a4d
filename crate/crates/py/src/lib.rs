//! Python bindings. Sets, hypergraphs, orders and covers are wrapped as
//! classes that also convert to and from the JSON text forms used by the
//! command-line tool.

use std::collections::{BTreeMap, BTreeSet};

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use hypercover::harness::{generate as gen_instance, GenKind, GenParams};
use hypercover::{
    BlockOrder, BruteSolver, Card, CheckOutcome, CoverSolver, Cut, EpSet, Hypergraph, MaxWoSolver,
    WitnessedCover,
};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializes")
}

fn card(c: Card) -> Option<u64> {
    match c {
        Card::Finite(n) => Some(n),
        Card::Aleph0 => None,
    }
}

/// An eventually periodic set of naturals.
#[pyclass(name = "EpSet", eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyEpSet {
    inner: EpSet,
}

#[pymethods]
impl PyEpSet {
    #[staticmethod]
    fn empty() -> Self {
        EpSet::empty().into()
    }

    #[staticmethod]
    fn naturals() -> Self {
        EpSet::naturals().into()
    }

    #[staticmethod]
    fn finite(items: Vec<u64>) -> Self {
        EpSet::finite(items).into()
    }

    #[staticmethod]
    fn range(lo: u64, hi: u64) -> Self {
        EpSet::range(lo, hi).into()
    }

    #[staticmethod]
    fn ap(start: u64, step: u64) -> Self {
        EpSet::ap(start, step).into()
    }

    #[staticmethod]
    fn from_parts(
        finite: Vec<u64>,
        threshold: u64,
        period: u64,
        residues: Vec<u64>,
    ) -> PyResult<Self> {
        EpSet::from_parts(finite, threshold, period, &residues)
            .map(Into::into)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str::<EpSet>(text)
            .map(Into::into)
            .map_err(err)
    }

    fn to_json(&self) -> String {
        to_json(&self.inner)
    }

    #[getter]
    fn threshold(&self) -> u64 {
        self.inner.threshold()
    }

    #[getter]
    fn period(&self) -> u64 {
        self.inner.period()
    }

    fn residues(&self) -> Vec<u64> {
        self.inner.residues().collect()
    }

    fn finite_part(&self) -> Vec<u64> {
        self.inner.finite_part().to_vec()
    }

    fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }

    /// Number of points, or None for an infinite set.
    fn cardinality(&self) -> Option<u64> {
        card(self.inner.cardinality())
    }

    fn min_element(&self) -> PyResult<u64> {
        self.inner.min_element().map_err(err)
    }

    fn max_element(&self) -> Option<u64> {
        self.inner.max_element()
    }

    /// The first `n` points in increasing order.
    fn enumerate(&self, n: usize) -> Vec<u64> {
        self.inner.enumerate(n)
    }

    fn union(&self, other: &PyEpSet) -> Self {
        self.inner.union(&other.inner).into()
    }

    fn intersect(&self, other: &PyEpSet) -> Self {
        self.inner.intersect(&other.inner).into()
    }

    fn difference(&self, other: &PyEpSet) -> Self {
        self.inner.difference(&other.inner).into()
    }

    fn is_subset(&self, other: &PyEpSet) -> bool {
        self.inner.is_subset(&other.inner)
    }

    fn intersects(&self, other: &PyEpSet) -> bool {
        self.inner.intersects(&other.inner)
    }

    fn __or__(&self, other: &PyEpSet) -> Self {
        self.union(other)
    }

    fn __and__(&self, other: &PyEpSet) -> Self {
        self.intersect(other)
    }

    fn __sub__(&self, other: &PyEpSet) -> Self {
        self.difference(other)
    }

    fn __contains__(&self, x: u64) -> bool {
        self.inner.contains(x)
    }

    fn __repr__(&self) -> String {
        format!("EpSet({})", self.inner)
    }
}

impl From<EpSet> for PyEpSet {
    fn from(inner: EpSet) -> Self {
        PyEpSet { inner }
    }
}

/// An indexed family of nonempty edges.
#[pyclass(name = "Hypergraph", eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyHypergraph {
    inner: Hypergraph,
}

#[pymethods]
impl PyHypergraph {
    #[new]
    fn new(edges: Vec<PyEpSet>) -> PyResult<Self> {
        Hypergraph::new(edges.into_iter().map(|e| e.inner).collect())
            .map(|inner| PyHypergraph { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn from_finite(edges: Vec<Vec<u64>>) -> PyResult<Self> {
        Hypergraph::from_finite(edges)
            .map(|inner| PyHypergraph { inner })
            .map_err(err)
    }

    /// Accepts the edge-list form `{"edges": [...]}`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str::<Hypergraph>(text)
            .map(|inner| PyHypergraph { inner })
            .map_err(err)
    }

    fn to_json(&self) -> String {
        to_json(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn edges(&self) -> Vec<PyEpSet> {
        self.inner.edges().iter().cloned().map(Into::into).collect()
    }

    fn universe(&self) -> PyEpSet {
        self.inner.universe().into()
    }

    /// Tests C(k, rho) with `rho=None` meaning countably infinite. Returns
    /// None when the property holds, else the first violating tuple.
    #[pyo3(signature = (k, rho))]
    fn check_c(&self, k: usize, rho: Option<u64>) -> PyResult<Option<Vec<usize>>> {
        let rho = rho.map_or(Card::Aleph0, Card::Finite);
        match self.inner.check_c(k, rho).map_err(err)? {
            CheckOutcome::Ok => Ok(None),
            CheckOutcome::Violation(t) => Ok(Some(t)),
        }
    }

    fn min_family(&self) -> Vec<usize> {
        self.inner.min_family()
    }

    fn __repr__(&self) -> String {
        format!("Hypergraph({})", self.to_json())
    }
}

/// A minimal cover with a witnessing edge index for each vertex.
#[pyclass(name = "WitnessedCover", eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCover {
    inner: WitnessedCover,
}

#[pymethods]
impl PyCover {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str::<WitnessedCover>(text)
            .map(Into::into)
            .map_err(err)
    }

    fn to_json(&self) -> String {
        to_json(&self.inner)
    }

    #[getter]
    fn cover(&self) -> Vec<u64> {
        self.inner.cover.iter().copied().collect()
    }

    #[getter]
    fn witness(&self) -> BTreeMap<u64, usize> {
        self.inner.witness.clone()
    }

    /// Raises ValueError if the certificate does not check against `h`.
    fn verify(&self, h: &PyHypergraph) -> PyResult<()> {
        self.inner.verify(&h.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("WitnessedCover({})", self.to_json())
    }
}

impl From<WitnessedCover> for PyCover {
    fn from(inner: WitnessedCover) -> Self {
        PyCover { inner }
    }
}

/// A well-order presented as stacked blocks of vertices.
#[pyclass(name = "BlockOrder", eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyOrder {
    inner: BlockOrder,
}

#[pymethods]
impl PyOrder {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str::<BlockOrder>(text)
            .map(|inner| PyOrder { inner })
            .map_err(err)
    }

    fn to_json(&self) -> String {
        to_json(&self.inner)
    }

    fn universe(&self) -> PyEpSet {
        self.inner.universe().into()
    }

    /// -1, 0 or 1 as `u` sits below, at or above `v`.
    fn compare(&self, u: u64, v: u64) -> PyResult<i8> {
        self.inner.compare(u, v).map(|o| o as i8).map_err(err)
    }

    fn edge_max(&self, edge: &PyEpSet) -> PyResult<Option<u64>> {
        self.inner.edge_max(&edge.inner).map_err(err)
    }

    fn is_maximizing(&self, h: &PyHypergraph) -> PyResult<bool> {
        self.inner.is_maximizing(&h.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("BlockOrder({})", self.to_json())
    }
}

#[pyfunction]
fn is_cover(h: &PyHypergraph, y: &PyEpSet) -> bool {
    hypercover::is_cover(&h.inner, &y.inner)
}

#[pyfunction]
fn find_witness(h: &PyHypergraph, y: BTreeSet<u64>) -> PyResult<PyCover> {
    hypercover::find_witness(&h.inner, &y)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn minimalize(h: &PyHypergraph, y: BTreeSet<u64>) -> PyResult<PyCover> {
    hypercover::minimalize(&h.inner, &y)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (h, bound = 16))]
fn brute_minimal_covers(h: &PyHypergraph, bound: usize) -> PyResult<Vec<Vec<u64>>> {
    let covers = hypercover::brute_minimal_covers_bounded(&h.inner, bound).map_err(err)?;
    Ok(covers
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect())
}

#[pyfunction]
fn build_maximizing(h: &PyHypergraph, k: usize, r: u64) -> PyResult<PyOrder> {
    hypercover::build_maximizing(&h.inner, k, r)
        .map(|inner| PyOrder { inner })
        .map_err(err)
}

#[pyfunction]
fn klimo_extract(order: &PyOrder, h: &PyHypergraph) -> PyResult<PyCover> {
    hypercover::klimo_extract(&order.inner, &h.inner)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn two_tier_cover(h: &PyHypergraph, k: usize, r: u64) -> PyResult<PyCover> {
    hypercover::two_tier_cover(&h.inner, k, r)
        .map(Into::into)
        .map_err(err)
}

/// Closure chain layers; singleton seeds in ascending order by default.
#[pyfunction]
#[pyo3(signature = (h, k, r, seeds = None))]
fn build_closure_chain(
    h: &PyHypergraph,
    k: usize,
    r: u64,
    seeds: Option<Vec<PyEpSet>>,
) -> PyResult<Vec<PyEpSet>> {
    let seeds = match seeds {
        Some(s) => s.into_iter().map(|e| e.inner).collect(),
        None => hypercover::default_seeds(&h.inner),
    };
    let cut = hypercover::build_closure_chain(&h.inner, k, r, &seeds).map_err(err)?;
    Ok(cut.layers().iter().cloned().map(Into::into).collect())
}

#[pyfunction]
fn is_good_cut(h: &PyHypergraph, layers: Vec<PyEpSet>) -> PyResult<bool> {
    let cut = Cut::new(layers.into_iter().map(|e| e.inner).collect()).map_err(err)?;
    Ok(hypercover::is_good_cut(&h.inner, &cut))
}

/// Layered cover over `layers`. `solver` is "brute", or "maxwo" with `k`
/// and `r`.
#[pyfunction]
#[pyo3(signature = (h, layers, solver = "brute", k = 2, r = 1))]
fn layered_cover(
    h: &PyHypergraph,
    layers: Vec<PyEpSet>,
    solver: &str,
    k: usize,
    r: u64,
) -> PyResult<PyCover> {
    let cut = Cut::new(layers.into_iter().map(|e| e.inner).collect()).map_err(err)?;
    let solver: Box<dyn CoverSolver> = match solver {
        "brute" => Box::new(BruteSolver),
        "maxwo" => Box::new(MaxWoSolver { k, r }),
        other => return Err(PyValueError::new_err(format!("unknown solver {other:?}"))),
    };
    hypercover::layered_cover(&h.inner, &cut, solver.as_ref())
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn layered_order(h: &PyHypergraph, layers: Vec<PyEpSet>, k: usize, r: u64) -> PyResult<PyOrder> {
    let cut = Cut::new(layers.into_iter().map(|e| e.inner).collect()).map_err(err)?;
    hypercover::layered_order(&h.inner, &cut, &MaxWoSolver { k, r })
        .map(|inner| PyOrder { inner })
        .map_err(err)
}

#[pyfunction]
fn r_closure(h: &PyHypergraph, m: &PyEpSet, r: u64) -> PyResult<PyEpSet> {
    hypercover::r_closure(&h.inner, &m.inner, r)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn pairwise_transversal(h: &PyHypergraph) -> PyResult<Vec<u64>> {
    hypercover::pairwise_transversal(&h.inner).map_err(err)
}

/// A seeded random instance; `kind` is finite_ckr, epset_ckr,
/// sunflower_violation or mixed.
#[pyfunction]
#[pyo3(signature = (kind, k, r, edges, vertices = 10, seed = 0))]
fn generate(
    kind: &str,
    k: usize,
    r: u64,
    edges: usize,
    vertices: u64,
    seed: u64,
) -> PyResult<PyHypergraph> {
    let kind: GenKind = kind.parse().map_err(PyValueError::new_err)?;
    let params = GenParams {
        k,
        r,
        edges,
        vertices,
    };
    let g = gen_instance(kind, &params, seed).map_err(err)?;
    Ok(PyHypergraph {
        inner: g.instance.hypergraph,
    })
}

#[pymodule]
pub fn pyhypercover(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEpSet>()?;
    m.add_class::<PyHypergraph>()?;
    m.add_class::<PyCover>()?;
    m.add_class::<PyOrder>()?;
    m.add_function(wrap_pyfunction!(is_cover, m)?)?;
    m.add_function(wrap_pyfunction!(find_witness, m)?)?;
    m.add_function(wrap_pyfunction!(minimalize, m)?)?;
    m.add_function(wrap_pyfunction!(brute_minimal_covers, m)?)?;
    m.add_function(wrap_pyfunction!(build_maximizing, m)?)?;
    m.add_function(wrap_pyfunction!(klimo_extract, m)?)?;
    m.add_function(wrap_pyfunction!(two_tier_cover, m)?)?;
    m.add_function(wrap_pyfunction!(build_closure_chain, m)?)?;
    m.add_function(wrap_pyfunction!(is_good_cut, m)?)?;
    m.add_function(wrap_pyfunction!(layered_cover, m)?)?;
    m.add_function(wrap_pyfunction!(layered_order, m)?)?;
    m.add_function(wrap_pyfunction!(r_closure, m)?)?;
    m.add_function(wrap_pyfunction!(pairwise_transversal, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    Ok(())
}
