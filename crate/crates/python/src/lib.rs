use std::cmp::Ordering;

use pyo3::exceptions::{PyArithmeticError, PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use serde::Serialize;

use sumset_density::constructions::{self, RationalCaseParams};
use sumset_density::{density, greedy, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Overflow(_) | Error::Precision { .. } => PyArithmeticError::new_err(e.to_string()),
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn density_target(text: &str) -> PyResult<sumset_density::DensityTarget> {
    sumset_density::parse_density(text).map_err(to_py)
}

fn finite_set(b: Vec<u64>) -> PyResult<sumset_density::FiniteSet> {
    sumset_density::FiniteSet::new(b).map_err(to_py)
}

/// Parse a density given as "p/q" or a finite decimal; returns (p, q) reduced.
#[pyfunction]
fn parse_density(text: &str) -> PyResult<(u64, u64)> {
    let t = density_target(text)?;
    Ok((t.numer(), t.denom()))
}

/// A subset of [0, N] stored as a packed bit array.
#[pyclass(frozen, module = "sumset_py")]
struct GroundSet(sumset_density::GroundSet);

#[pymethods]
impl GroundSet {
    #[new]
    fn new(horizon: u64, elements: Vec<u64>) -> PyResult<Self> {
        sumset_density::GroundSet::from_elements(horizon, elements)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        sumset_density::GroundSet::from_bytes(data)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        sumset_density::GroundSet::read_text(text.as_bytes())
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn horizon(&self) -> u64 {
        self.0.horizon()
    }

    fn elements(&self) -> Vec<u64> {
        self.0.elements()
    }

    /// |X ∩ [1, x]|.
    fn counting(&self, x: i64) -> PyResult<u64> {
        self.0.counting(x).map_err(to_py)
    }

    fn restrict(&self, horizon: u64) -> PyResult<Self> {
        self.0.restrict(horizon).map(Self).map_err(to_py)
    }

    /// X + B for a finite B, truncated at the horizon.
    fn sumset(&self, b: Vec<u64>) -> PyResult<Self> {
        Ok(Self(self.0.sumset(&finite_set(b)?)))
    }

    /// X + Y; both sets must share a horizon.
    fn sum(&self, other: &GroundSet) -> Self {
        Self(self.0.sum(&other.0))
    }

    fn iterated_sumset(&self, j: u32) -> PyResult<Self> {
        self.0.iterated_sumset(j).map(Self).map_err(to_py)
    }

    fn is_subset_of(&self, other: &GroundSet) -> bool {
        self.0.is_subset_of(&other.0)
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.0.to_bytes())
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __contains__(&self, x: u64) -> bool {
        self.0.contains(x)
    }

    fn __eq__(&self, other: &GroundSet) -> bool {
        self.0.horizon() == other.0.horizon() && self.0.words() == other.0.words()
    }

    fn __repr__(&self) -> String {
        format!(
            "GroundSet(horizon={}, len={})",
            self.0.horizon(),
            self.0.len()
        )
    }
}

/// θ given as "sqrt:d", "quad:u,v,w,d" or "fixed:decimal,F".
#[pyclass(frozen, module = "sumset_py")]
struct Theta(sumset_density::Theta);

#[pymethods]
impl Theta {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        sumset_density::Theta::parse(text).map(Self).map_err(to_py)
    }

    fn floor_mul(&self, n: u64) -> PyResult<u64> {
        self.0.floor_mul(n).map_err(to_py)
    }

    /// -1 if {nθ} < p/q, 1 if greater.
    fn frac_compare(&self, n: u64, t: &str) -> PyResult<i8> {
        let t = density_target(t)?;
        Ok(match self.0.frac_compare(n, t).map_err(to_py)? {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        })
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __repr__(&self) -> String {
        format!("Theta('{}')", self.0)
    }
}

#[pyfunction]
#[pyo3(signature = (b, alpha, horizon))]
fn build_greedy(b: Vec<u64>, alpha: &str, horizon: u64) -> PyResult<GroundSet> {
    greedy::build_greedy(&finite_set(b)?, density_target(alpha)?, horizon)
        .map(GroundSet)
        .map_err(to_py)
}

/// Case A parameters for rational alpha: returns a dict with the modulus,
/// residues and the exact density of jA for 1 <= j <= k.
#[pyfunction]
fn rational_construction<'py>(py: Python<'py>, alpha: &str, k: u64) -> PyResult<Bound<'py, PyAny>> {
    #[derive(Serialize)]
    struct Summary<'a> {
        params: &'a RationalCaseParams,
        modulus: u64,
        densities: Vec<String>,
    }
    let params = RationalCaseParams::from_target(density_target(alpha)?, k).map_err(to_py)?;
    let densities = (1..=k)
        .map(|j| params.jfold_density(j).to_string())
        .collect();
    to_dict(
        py,
        &Summary {
            params: &params,
            modulus: params.modulus(),
            densities,
        },
    )
}

#[pyfunction]
fn beatty_construction(theta: &Theta, k: u64, horizon: u64) -> PyResult<GroundSet> {
    constructions::beatty_construction(&theta.0, k, horizon)
        .map(GroundSet)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (set, window=density::DEFAULT_WINDOW_FRACTION, grid=density::DEFAULT_GRID))]
fn density_report<'py>(
    py: Python<'py>,
    set: &GroundSet,
    window: f64,
    grid: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let report = density::density_report(&set.0, window, grid).map_err(to_py)?;
    to_dict(py, &report)
}

/// Check the band decomposition of jA for the Beatty construction.
#[pyfunction]
#[pyo3(signature = (theta, j, k, horizon, epsilon=None, cap=constructions::DEFAULT_WITNESS_CAP))]
fn verify_case_b<'py>(
    py: Python<'py>,
    theta: &Theta,
    j: u64,
    k: u64,
    horizon: u64,
    epsilon: Option<&str>,
    cap: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let epsilon = match epsilon {
        Some(e) => density_target(e)?,
        None => constructions::default_epsilon(k),
    };
    let report =
        constructions::verify_case_b(&theta.0, j, k, epsilon, horizon, cap).map_err(to_py)?;
    let dict = to_dict(py, &report)?;
    dict.set_item("passed", report.passed())?;
    Ok(dict)
}

#[pymodule]
fn sumset_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<GroundSet>()?;
    m.add_class::<Theta>()?;
    m.add_function(wrap_pyfunction!(parse_density, m)?)?;
    m.add_function(wrap_pyfunction!(build_greedy, m)?)?;
    m.add_function(wrap_pyfunction!(rational_construction, m)?)?;
    m.add_function(wrap_pyfunction!(beatty_construction, m)?)?;
    m.add_function(wrap_pyfunction!(density_report, m)?)?;
    m.add_function(wrap_pyfunction!(verify_case_b, m)?)?;
    Ok(())
}
