//! Python bindings for the geometric-side toolkit.
//!
//! Structured results are returned as plain dicts built from the JSON form of
//! the Rust reports. Domain and configuration errors raise `ValueError`;
//! numerical failures raise `RuntimeError`.

use std::collections::BTreeMap;

use pbk_core::archimedean::{self, ArchTestFunction, HMinusRoute};
use pbk_core::formula::{self, DiagonalNormalization};
use pbk_core::numkernel::QuadratureSpec;
use pbk_core::padic::{self, GlobalTestFunction};
use pbk_core::{oracle, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyComplex;
use serde::Serialize;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Precondition(_) | Error::Config(_) | Error::UnsupportedVariant(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn test_function(level: Option<BTreeMap<u64, u32>>) -> PyResult<GlobalTestFunction> {
    match level {
        Some(map) => GlobalTestFunction::new(map).map_err(to_py_err),
        None => Ok(GlobalTestFunction::trivial()),
    }
}

fn arch_family(family: &str, t: f64, delta: Option<f64>) -> PyResult<ArchTestFunction> {
    match (family, delta) {
        ("family1", Some(d)) => ArchTestFunction::family1(t, d).map_err(to_py_err),
        ("family1", None) => Err(PyValueError::new_err("family1 needs delta")),
        ("family2", _) => ArchTestFunction::family2(t).map_err(to_py_err),
        (other, _) => Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    }
}

/// Classical Kloosterman sum `S(m, n; c)`.
#[pyfunction]
fn kloosterman_classical(m: i64, n: i64, c: u64) -> f64 {
    padic::kloosterman_classical(m, n, c)
}

/// Generalized sum `H(m, n, c)` for the test function of the given level
/// map `{p: r}` (level one when omitted).
#[pyfunction]
#[pyo3(signature = (m, n, c, level=None))]
fn kloosterman_generalized<'py>(
    py: Python<'py>,
    m: i64,
    n: i64,
    c: u64,
    level: Option<BTreeMap<u64, u32>>,
) -> PyResult<Bound<'py, PyComplex>> {
    let f = test_function(level)?;
    let v = padic::kloosterman_generalized(&f, m, n, c).map_err(to_py_err)?;
    Ok(PyComplex::from_doubles(py, v.value.re(), v.value.im()))
}

/// `a_m / √m` for the conductor-11 curve, by point counting.
#[pyfunction]
fn lambda_oracle(m: u64) -> PyResult<f64> {
    oracle::lambda_oracle(m).map_err(to_py_err)
}

/// Geometric side of the weight-2 Petersson formula at level `N`.
#[pyfunction]
#[pyo3(signature = (m1, m2, c_max, level=11))]
fn petersson2_geometric<'py>(py: Python<'py>, m1: u64, m2: u64, c_max: u64, level: u64) -> PyResult<Bound<'py, PyAny>> {
    let f = GlobalTestFunction::of_level(level).map_err(to_py_err)?;
    let r = py
        .detach(|| formula::petersson2_geometric(&f, m1, m2, c_max, DiagonalNormalization::Theorem))
        .map_err(to_py_err)?;
    to_dict(py, &r)
}

/// Hecke eigenvalue recovery at level 11 against the point-counting oracle.
#[pyfunction]
#[pyo3(signature = (m_list, c_max=100_000, tolerance=1e-2))]
fn verify_petersson2<'py>(py: Python<'py>, m_list: Vec<u64>, c_max: u64, tolerance: f64) -> PyResult<Bound<'py, PyAny>> {
    let r = py
        .detach(|| formula::verify_weight2_level11(&m_list, c_max, tolerance))
        .map_err(to_py_err)?;
    to_dict(py, &r)
}

/// `H∞⁻(x)` for `family` in {"family1", "family2"}, by the K-form or I-form.
#[pyfunction]
#[pyo3(signature = (family, t, x, delta=None, route="k-form"))]
fn h_minus(family: &str, t: f64, x: f64, delta: Option<f64>, route: &str) -> PyResult<f64> {
    let h = arch_family(family, t, delta)?;
    let route = match route {
        "k-form" => HMinusRoute::KForm,
        "i-form" => HMinusRoute::IForm,
        other => return Err(PyValueError::new_err(format!("unknown route {other:?}"))),
    };
    archimedean::h_minus_transform(&h, x, route, &QuadratureSpec::default())
        .map(|a| a.value)
        .map_err(to_py_err)
}

/// `f∞(1)` for the given family.
#[pyfunction]
#[pyo3(signature = (family, t, delta=None))]
fn f_infty_one(family: &str, t: f64, delta: Option<f64>) -> PyResult<f64> {
    let h = arch_family(family, t, delta)?;
    archimedean::f_infty_identity(&h, &QuadratureSpec::default())
        .map(|a| a.value)
        .map_err(to_py_err)
}

/// Opposite-sign parity demo at the given level with Family2 of scale `t`.
#[pyfunction]
#[pyo3(signature = (m=1, t=10.0, c_max=1100, level=11))]
fn parity_demo<'py>(py: Python<'py>, m: u64, t: f64, c_max: u64, level: u64) -> PyResult<Bound<'py, PyAny>> {
    let f = GlobalTestFunction::of_level(level).map_err(to_py_err)?;
    let h = ArchTestFunction::family2(t).map_err(to_py_err)?;
    let r = py
        .detach(|| formula::parity_bound_demo(&f, &h, m, c_max, &QuadratureSpec::default()))
        .map_err(to_py_err)?;
    to_dict(py, &r)
}

#[pymodule]
fn pbk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(kloosterman_classical, m)?)?;
    m.add_function(wrap_pyfunction!(kloosterman_generalized, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(petersson2_geometric, m)?)?;
    m.add_function(wrap_pyfunction!(verify_petersson2, m)?)?;
    m.add_function(wrap_pyfunction!(h_minus, m)?)?;
    m.add_function(wrap_pyfunction!(f_infty_one, m)?)?;
    m.add_function(wrap_pyfunction!(parity_demo, m)?)?;
    Ok(())
}
