use std::collections::BTreeSet;

use justinf_core::algebra::{
    self, commutant_dimension, nucleus_rank_at_level, pi_level, psi_iterate, AlgebraElement,
};
use justinf_core::bratteli::{self, BratteliDiagram, DiagramIdeal};
use justinf_core::grig::{self, GroupElement};
use justinf_core::k0::{self, K0Element};
use justinf_core::primspace::{self, FiniteT0Space};
use justinf_core::{verify, Error, Limits};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

pyo3::create_exception!(justinf, JustinfError, PyValueError);
pyo3::create_exception!(justinf, PreconditionError, JustinfError);
pyo3::create_exception!(justinf, ResourceCapError, JustinfError);
pyo3::create_exception!(justinf, MalformedError, JustinfError);

fn err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Precondition(_) => PreconditionError::new_err(msg),
        Error::ResourceCap { .. } => ResourceCapError::new_err(msg),
        Error::Malformed(_) => MalformedError::new_err(msg),
    }
}

trait OrRaise<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for Result<T, Error> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

/// Converts any serializable value into plain Python data through JSON.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(|e| MalformedError::new_err(format!("{what} JSON: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("library values serialize")
}

fn limits(depth_cap: Option<usize>, group_level_cap: Option<usize>, matrix_level_cap: Option<usize>) -> Limits {
    let mut l = Limits::default();
    l.depth_cap = depth_cap.unwrap_or(l.depth_cap);
    l.group_level_cap = group_level_cap.unwrap_or(l.group_level_cap);
    l.matrix_level_cap = matrix_level_cap.unwrap_or(l.matrix_level_cap);
    l
}

#[pyclass(name = "GroupElement", module = "justinf", frozen)]
struct PyGroupElement(GroupElement);

#[pymethods]
impl PyGroupElement {
    #[new]
    #[pyo3(signature = (word = ""))]
    fn new(word: &str) -> PyResult<Self> {
        Ok(PyGroupElement(word.parse().py()?))
    }

    fn word(&self) -> String {
        self.0.to_word()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_word()
    }

    fn __repr__(&self) -> String {
        format!("GroupElement({:?})", self.0.to_word())
    }

    /// Equality in the group, not of words.
    fn __eq__(&self, other: &PyGroupElement) -> bool {
        grig::equal(&self.0, &other.0)
    }

    fn __mul__(&self, other: &PyGroupElement) -> PyGroupElement {
        PyGroupElement(self.0.mul(&other.0))
    }

    fn inverse(&self) -> PyGroupElement {
        PyGroupElement(self.0.inverse())
    }

    fn is_trivial(&self) -> bool {
        grig::is_trivial(&self.0)
    }

    /// The order, or None if it exceeds 2**max_exponent.
    #[pyo3(signature = (max_exponent = 16))]
    fn order(&self, max_exponent: u32) -> Option<u128> {
        grig::order(&self.0, max_exponent).value()
    }

    /// (first section, second section, swaps the root).
    fn wreath(&self) -> (PyGroupElement, PyGroupElement, bool) {
        let w = grig::wreath(&self.0);
        (PyGroupElement(w.first), PyGroupElement(w.second), w.active)
    }

    fn section(&self, vertex: &str) -> PyResult<PyGroupElement> {
        Ok(PyGroupElement(grig::section(&self.0, vertex).py()?))
    }

    fn level_permutation(&self, level: usize) -> PyResult<Vec<u32>> {
        let cap = Limits::default().matrix_level_cap;
        if level > cap {
            return Err(err(Error::ResourceCap {
                what: "matrix level",
                requested: level,
                cap,
            }));
        }
        Ok(grig::level_permutation(&self.0, level).map().to_vec())
    }

    #[pyo3(signature = (level, group_level_cap = None))]
    fn normal_closure_index(&self, level: usize, group_level_cap: Option<usize>) -> PyResult<u64> {
        grig::normal_closure_index(&self.0, level, &limits(None, group_level_cap, None)).py()
    }
}

#[pyclass(name = "AlgebraElement", module = "justinf", frozen)]
struct PyAlgebraElement(AlgebraElement);

#[pymethods]
impl PyAlgebraElement {
    /// Parses an expression such as "(1-d)a(1-d)" or "2 - 2a".
    #[new]
    fn new(expr: &str) -> PyResult<Self> {
        Ok(PyAlgebraElement(expr.parse().py()?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyAlgebraElement(from_json(text, "element")?))
    }

    fn to_json(&self) -> String {
        to_json(&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("AlgebraElement({:?})", self.0.to_string())
    }

    /// Equality in the group algebra.
    fn __eq__(&self, other: &PyAlgebraElement) -> bool {
        (&self.0 - &other.0).is_zero()
    }

    fn __add__(&self, other: &PyAlgebraElement) -> PyAlgebraElement {
        PyAlgebraElement(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyAlgebraElement) -> PyAlgebraElement {
        PyAlgebraElement(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyAlgebraElement) -> PyAlgebraElement {
        PyAlgebraElement(&self.0 * &other.0)
    }

    fn __neg__(&self) -> PyAlgebraElement {
        PyAlgebraElement(-&self.0)
    }

    fn star(&self) -> PyAlgebraElement {
        PyAlgebraElement(self.0.star())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Kernel certificate: {"in_kernel", "depth", "witness"}.
    #[pyo3(signature = (depth_cap = None))]
    fn kernel_test(&self, py: Python<'_>, depth_cap: Option<usize>) -> PyResult<Py<PyAny>> {
        to_py(py, &algebra::is_zero_in_b(&self.0, &limits(depth_cap, None, None)).py()?)
    }

    fn is_zero_in_b(&self) -> PyResult<bool> {
        Ok(algebra::is_zero_in_b(&self.0, &Limits::default()).py()?.in_kernel)
    }

    /// Scalar-entry witness; method is "proof" or "scan".
    #[pyo3(signature = (method = "proof", depth_cap = None))]
    fn scalar_entry(&self, py: Python<'_>, method: &str, depth_cap: Option<usize>) -> PyResult<Py<PyAny>> {
        let l = limits(depth_cap, None, None);
        let w = match method {
            "proof" => algebra::find_scalar_entry(&self.0, &l),
            "scan" => algebra::scan_scalar_entry(&self.0, &l),
            other => return Err(MalformedError::new_err(format!("unknown method {other:?}"))),
        };
        to_py(py, &w.py()?)
    }

    /// Level matrix as a list of rows of fraction strings.
    #[pyo3(signature = (level, matrix_level_cap = None))]
    fn pi_level(&self, level: usize, matrix_level_cap: Option<usize>) -> PyResult<Vec<Vec<String>>> {
        let m = pi_level(&self.0, level, &limits(None, None, matrix_level_cap)).py()?;
        Ok((0..m.size())
            .map(|r| (0..m.size()).map(|c| m.get(r, c).to_string()).collect())
            .collect())
    }

    /// Sparse recursion matrix at the given depth: {"depth", "size", "entries"}.
    #[pyo3(signature = (depth = 1))]
    fn psi(&self, py: Python<'_>, depth: usize) -> PyResult<Py<PyAny>> {
        to_py(py, &psi_iterate(&self.0, depth, &Limits::default()).py()?)
    }
}

/// The kernel element (1 - g1)(1 - g2) built from commuting rigid elements.
#[pyfunction]
fn rigid_kernel_element(g1: &PyGroupElement, g2: &PyGroupElement) -> PyResult<PyAlgebraElement> {
    Ok(PyAlgebraElement(algebra::rigid_kernel_element(&g1.0, &g2.0).py()?))
}

#[pyfunction]
#[pyo3(signature = (level, matrix_level_cap = None))]
fn commutant(level: usize, matrix_level_cap: Option<usize>) -> PyResult<usize> {
    commutant_dimension(level, &limits(None, None, matrix_level_cap)).py()
}

#[pyfunction]
fn nucleus_rank(level: usize) -> PyResult<usize> {
    nucleus_rank_at_level(level, &Limits::default()).py()
}

#[pyclass(name = "DiagramIdeal", module = "justinf", frozen)]
struct PyIdeal(DiagramIdeal);

#[pymethods]
impl PyIdeal {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyIdeal(from_json(text, "ideal")?))
    }

    fn to_json(&self) -> String {
        to_json(&self.0)
    }

    /// Member vertices as 1-based (level, index) pairs.
    fn vertices(&self) -> Vec<(usize, usize)> {
        self.0.vertices().map(|v| (v.level + 1, v.index + 1)).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "BratteliDiagram", module = "justinf", frozen)]
struct PyDiagram(BratteliDiagram);

#[pymethods]
impl PyDiagram {
    #[staticmethod]
    fn y_infty(depth: usize) -> PyResult<Self> {
        Ok(PyDiagram(bratteli::build_y_infty(depth, &Limits::default()).py()?))
    }

    #[staticmethod]
    fn strictly_rfd(depth: usize) -> PyResult<Self> {
        Ok(PyDiagram(bratteli::build_strictly_rfd(depth, &Limits::default()).py()?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyDiagram(from_json(text, "diagram")?))
    }

    fn to_json(&self) -> String {
        to_json(&self.0)
    }

    #[getter]
    fn levels(&self) -> Vec<Vec<u64>> {
        self.0.levels().to_vec()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.0.depth()
    }

    /// Ideal of the open set of columns not listed in `omitted`.
    fn open_set_ideal(&self, omitted: BTreeSet<usize>) -> PyResult<PyIdeal> {
        Ok(PyIdeal(bratteli::ideal_from_open_set(&self.0, &omitted).py()?))
    }

    fn left_half(&self) -> PyResult<PyIdeal> {
        Ok(PyIdeal(bratteli::left_half(&self.0).py()?))
    }

    fn u(&self, k: usize) -> PyResult<PyIdeal> {
        Ok(PyIdeal(bratteli::strictly_rfd_u(&self.0, k).py()?))
    }

    fn is_ideal(&self, ideal: &PyIdeal) -> PyResult<bool> {
        bratteli::is_ideal(&self.0, &ideal.0).py()
    }

    fn ideals(&self) -> PyResult<Vec<PyIdeal>> {
        Ok(bratteli::enumerate_ideals(&self.0).py()?.into_iter().map(PyIdeal).collect())
    }

    fn quotient(&self, ideal: &PyIdeal) -> PyResult<PyDiagram> {
        Ok(PyDiagram(bratteli::quotient(&self.0, &ideal.0).py()?))
    }

    fn is_essential(&self, ideal: &PyIdeal) -> PyResult<bool> {
        bratteli::is_essential(&self.0, &ideal.0, &Limits::default()).py()
    }

    /// {"kind": "finite", "dims", "from_level"} | {"kind": "infinite"} | {"kind": "undetermined"}.
    fn limit_dimension(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &bratteli::limit_dimension(&self.0, self.0.depth()).py()?)
    }

    fn primitive_quotient_sizes(&self, j_max: usize) -> PyResult<Vec<u64>> {
        bratteli::primitive_quotient_sizes(&self.0, j_max).py()
    }

    #[pyo3(signature = (mark = None))]
    fn to_dot(&self, mark: Option<&PyIdeal>) -> String {
        self.0.to_dot(mark.map(|m| &m.0))
    }
}

#[pyclass(name = "K0Element", module = "justinf", frozen)]
struct PyK0(K0Element);

#[pymethods]
impl PyK0 {
    #[new]
    fn new(vector: Vec<i64>) -> PyResult<Self> {
        Ok(PyK0(K0Element::new(vector).py()?))
    }

    #[staticmethod]
    fn unit() -> Self {
        PyK0(K0Element::unit())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyK0(from_json(text, "k0 element")?))
    }

    fn to_json(&self) -> String {
        to_json(&self.0)
    }

    #[getter]
    fn level(&self) -> usize {
        self.0.level()
    }

    #[getter]
    fn vector(&self) -> Vec<i64> {
        self.0.vector().to_vec()
    }

    fn push(&self, level: usize) -> PyResult<Vec<i64>> {
        self.0.push(level).py()
    }

    fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// The first `count` terms of the image sequence in the model group.
    #[pyo3(signature = (count = 10))]
    fn rho(&self, count: usize) -> PyResult<Vec<i64>> {
        self.0.rho_model().take(count).py()
    }

    fn __add__(&self, other: &PyK0) -> PyResult<PyK0> {
        Ok(PyK0(self.0.add(&other.0).py()?))
    }

    fn __neg__(&self) -> PyResult<PyK0> {
        Ok(PyK0(self.0.neg().py()?))
    }

    fn __eq__(&self, other: &PyK0) -> bool {
        k0::equal(&self.0, &other.0)
    }

    fn __repr__(&self) -> String {
        format!("K0Element(level={}, vector={:?})", self.0.level(), self.0.vector())
    }
}

#[pyclass(name = "FiniteSpace", module = "justinf", frozen)]
struct PySpace(FiniteT0Space);

#[pymethods]
impl PySpace {
    #[staticmethod]
    fn yn(n: usize) -> PyResult<Self> {
        Ok(PySpace(primspace::build_yn(n).py()?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySpace(from_json(text, "space")?))
    }

    fn to_json(&self) -> String {
        to_json(&self.0)
    }

    #[getter]
    fn points(&self) -> Vec<String> {
        self.0.points().to_vec()
    }

    fn closed_sets(&self) -> Vec<Vec<String>> {
        self.0.closed_sets().map(|s| self.0.names(s)).collect()
    }

    fn is_spectral(&self) -> bool {
        primspace::is_spectral(&self.0)
    }

    /// n if the space is the n-point model up to relabeling.
    fn classify(&self) -> Option<usize> {
        primspace::classify_yn(&self.0)
    }
}

/// Runs acceptance criteria; returns a list of {"id", "title", "passed", "detail"}.
#[pyfunction]
#[pyo3(signature = (seed = None, only = None))]
fn verify_paper(py: Python<'_>, seed: Option<u64>, only: Option<Vec<String>>) -> PyResult<Py<PyAny>> {
    let seed = seed.unwrap_or(verify::DEFAULT_SEED);
    let limits = Limits::default();
    let reports = match only {
        None => verify::run_all(seed, &limits),
        Some(ids) => ids
            .iter()
            .map(|id| {
                verify::run_criterion(id, seed, &limits)
                    .ok_or_else(|| MalformedError::new_err(format!("unknown criterion {id:?}")))
            })
            .collect::<PyResult<Vec<_>>>()?,
    };
    to_py(py, &reports)
}

#[pymodule]
fn justinf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("JustinfError", py.get_type::<JustinfError>())?;
    m.add("PreconditionError", py.get_type::<PreconditionError>())?;
    m.add("ResourceCapError", py.get_type::<ResourceCapError>())?;
    m.add("MalformedError", py.get_type::<MalformedError>())?;
    m.add_class::<PyGroupElement>()?;
    m.add_class::<PyAlgebraElement>()?;
    m.add_class::<PyDiagram>()?;
    m.add_class::<PyIdeal>()?;
    m.add_class::<PyK0>()?;
    m.add_class::<PySpace>()?;
    m.add_function(wrap_pyfunction!(rigid_kernel_element, m)?)?;
    m.add_function(wrap_pyfunction!(commutant, m)?)?;
    m.add_function(wrap_pyfunction!(nucleus_rank, m)?)?;
    m.add_function(wrap_pyfunction!(verify_paper, m)?)?;
    Ok(())
}
