//! Python bindings: the main types and operations with rational
//! coefficients, plus the seeded verification suites over either field.
//! Serialized exchange uses the same JSON shapes as the command-line tool.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

use latticework::bilattice::GroupShape;
use latticework::harness::{run_suite, FieldChoice, TrialConfig};
use latticework::json as wire;
use latticework::polygon::{self, BasicScope};
use latticework::{filtration, CocharType, Error, LaurentScalar, Rat};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let text = v.to_string();
    let json = PyModule::import(py, "json")?;
    let obj = json.call_method1("loads", (text,))?;
    Ok(obj.unbind())
}

fn py_to_json(obj: &Bound<'_, PyAny>) -> PyResult<serde_json::Value> {
    let json = PyModule::import(obj.py(), "json")?;
    let text: String = json.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// An exact element of Q((t)) given by a rational function.
#[pyclass(name = "Scalar", from_py_object)]
#[derive(Clone)]
struct PyScalar {
    inner: LaurentScalar<Rat>,
}

#[pymethods]
impl PyScalar {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyScalar {
            inner: LaurentScalar::parse((), text).map_err(err)?,
        })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Scalar({:?})", self.inner.to_string())
    }

    fn __eq__(&self, other: &PyScalar) -> bool {
        self.inner == other.inner
    }

    fn __add__(&self, other: &PyScalar) -> PyScalar {
        PyScalar {
            inner: self.inner.add(&other.inner),
        }
    }

    fn __sub__(&self, other: &PyScalar) -> PyScalar {
        PyScalar {
            inner: self.inner.sub(&other.inner),
        }
    }

    fn __mul__(&self, other: &PyScalar) -> PyScalar {
        PyScalar {
            inner: self.inner.mul(&other.inner),
        }
    }

    fn __truediv__(&self, other: &PyScalar) -> PyResult<PyScalar> {
        Ok(PyScalar {
            inner: self.inner.div(&other.inner).map_err(err)?,
        })
    }

    /// t-adic valuation; None for zero.
    fn valuation(&self) -> Option<i64> {
        self.inner.valuation().finite()
    }

    /// Exact expansion coefficients of t^lo .. t^hi as strings.
    fn expand(&self, lo: i64, hi: i64) -> PyResult<Vec<String>> {
        if lo > hi {
            return Err(PyValueError::new_err("expand needs lo <= hi"));
        }
        Ok(self
            .inner
            .expand(lo, hi)
            .into_iter()
            .map(|c| c.to_string())
            .collect())
    }
}

/// A full-rank lattice over Q[[t]] ∩ Q(t), given by basis columns of
/// scalar-grammar strings.
#[pyclass(name = "Lattice", from_py_object)]
#[derive(Clone)]
struct PyLattice {
    inner: latticework::LatticeBasis<Rat>,
}

#[pymethods]
impl PyLattice {
    #[new]
    fn new(cols: Vec<Vec<String>>) -> PyResult<Self> {
        let dim = cols.len();
        let parsed = cols
            .iter()
            .map(|col| {
                col.iter()
                    .map(|s| LaurentScalar::parse((), s))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let mat = latticework::matrix::Mat::from_cols((), dim, parsed).map_err(err)?;
        Ok(PyLattice {
            inner: latticework::LatticeBasis::new(mat).map_err(err)?,
        })
    }

    #[staticmethod]
    fn standard(dim: usize) -> PyLattice {
        PyLattice {
            inner: latticework::LatticeBasis::standard((), dim),
        }
    }

    fn __repr__(&self) -> String {
        format!("Lattice(dim={})", self.inner.dim())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn cols(&self) -> Vec<Vec<String>> {
        let m = self.inner.basis_matrix();
        (0..m.cols())
            .map(|j| (0..m.rows()).map(|i| m.get(i, j).to_string()).collect())
            .collect()
    }

    /// The Cartan type of (self, other).
    fn relative_type(&self, other: &PyLattice) -> PyResult<Vec<i64>> {
        Ok(self
            .inner
            .relative_type(&other.inner)
            .map_err(err)?
            .entries()
            .to_vec())
    }

    fn contains(&self, vector: Vec<String>) -> PyResult<bool> {
        let v = vector
            .iter()
            .map(|s| LaurentScalar::parse((), s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        self.inner.contains(&v).map_err(err)
    }

    fn contains_lattice(&self, other: &PyLattice) -> PyResult<bool> {
        self.inner.contains_lattice(&other.inner).map_err(err)
    }

    fn equals(&self, other: &PyLattice) -> PyResult<bool> {
        self.inner.eq_lattice(&other.inner).map_err(err)
    }

    fn join(&self, other: &PyLattice) -> PyResult<PyLattice> {
        Ok(PyLattice {
            inner: self.inner.join(&other.inner).map_err(err)?,
        })
    }

    fn meet(&self, other: &PyLattice) -> PyResult<PyLattice> {
        Ok(PyLattice {
            inner: self.inner.meet(&other.inner).map_err(err)?,
        })
    }

    fn dual(&self) -> PyResult<PyLattice> {
        Ok(PyLattice {
            inner: self.inner.dual().map_err(err)?,
        })
    }

    fn scale(&self, k: i64) -> PyLattice {
        PyLattice {
            inner: self.inner.scale(k),
        }
    }
}

/// A pair of lattices in the same ambient space.
#[pyclass(name = "BilatticedSpace", from_py_object)]
#[derive(Clone)]
struct PyBilattice {
    inner: latticework::BilatticedSpace<Rat>,
}

#[pymethods]
impl PyBilattice {
    #[new]
    fn new(l1: &PyLattice, l2: &PyLattice) -> PyResult<Self> {
        Ok(PyBilattice {
            inner: latticework::BilatticedSpace::new(l1.inner.clone(), l2.inner.clone())
                .map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("BilatticedSpace(dim={})", self.inner.dim())
    }

    fn bl_type(&self) -> PyResult<Vec<i64>> {
        Ok(self.inner.bl_type().map_err(err)?.entries().to_vec())
    }

    fn bl_ord(&self) -> PyResult<i64> {
        self.inner.bl_ord().map_err(err)
    }

    fn exterior(&self, k: usize) -> PyResult<PyBilattice> {
        Ok(PyBilattice {
            inner: self.inner.exterior(k).map_err(err)?,
        })
    }

    /// Flag induced on the residue of one lattice by the other, as the
    /// usual JSON dictionary.
    fn bb_side(&self, py: Python<'_>, side: u8) -> PyResult<Py<PyAny>> {
        let flag = self.inner.bb_side(side).map_err(err)?;
        json_to_py(py, &wire::flag_to_value(&flag))
    }

    /// Graded dimensions of the side-2 flag between lo and hi inclusive.
    fn graded_dims(&self, side: u8, lo: i64, hi: i64) -> PyResult<Vec<usize>> {
        let flag = self.inner.bb_side(side).map_err(err)?;
        Ok((lo..=hi).map(|j| flag.graded_dim(j)).collect())
    }
}

/// Goodness of a block-upper-triangular element, as a dictionary.
#[pyfunction]
fn is_good(py: Python<'_>, cols: Vec<Vec<String>>, blocks: Vec<usize>) -> PyResult<Py<PyAny>> {
    let dim = cols.len();
    let parsed = cols
        .iter()
        .map(|col| {
            col.iter()
                .map(|s| LaurentScalar::<Rat>::parse((), s))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let mat = latticework::matrix::Mat::from_cols((), dim, parsed).map_err(err)?;
    let shape = GroupShape::new(blocks).map_err(err)?;
    let report = latticework::is_good(&mat, &shape).map_err(err)?;
    let value = serde_json::to_value(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

/// Canonical lattice of a flag given in the JSON dictionary shape.
#[pyfunction]
fn rees_lattice(flag: &Bound<'_, PyAny>) -> PyResult<PyLattice> {
    let value = py_to_json(flag)?;
    let parsed = wire::flag_from_value::<Rat>((), &value).map_err(err)?;
    Ok(PyLattice {
        inner: filtration::rees_lattice(&parsed),
    })
}

#[pyfunction]
fn dominance_leq(mu: Vec<i64>, nu: Vec<i64>) -> PyResult<bool> {
    let mu = CocharType::new(mu);
    let nu = CocharType::new(nu);
    filtration::dominance_leq(&mu, &nu).map_err(err)
}

#[pyfunction]
fn is_minuscule(mu: Vec<i64>) -> bool {
    CocharType::new(mu).is_minuscule()
}

#[pyfunction]
fn mazur_member(nu: Vec<String>, mu: Vec<i64>) -> PyResult<bool> {
    let slopes = parse_slopes(&nu)?;
    polygon::mazur_member(&slopes, &CocharType::new(mu)).map_err(err)
}

#[pyfunction]
fn basic_element(mu: Vec<i64>) -> Vec<String> {
    polygon::basic_element(&CocharType::new(mu))
        .entries()
        .iter()
        .map(polygon::rational_to_string)
        .collect()
}

#[pyfunction]
fn is_compact_mod_center(nu: Vec<String>) -> PyResult<bool> {
    Ok(polygon::is_compact_mod_center(&parse_slopes(&nu)?))
}

#[pyfunction]
fn is_basic_for_shape(nu: Vec<String>, blocks: Vec<usize>, levi_only: bool) -> PyResult<bool> {
    let shape = GroupShape::new(blocks).map_err(err)?;
    let scope = if levi_only {
        BasicScope::LeviBlockwise
    } else {
        BasicScope::FullGroup
    };
    polygon::is_basic_for_shape(&parse_slopes(&nu)?, &shape, scope).map_err(err)
}

#[pyfunction]
fn tate_anchor(py: Python<'_>, k: i64) -> PyResult<Py<PyAny>> {
    let anchor = polygon::tate_anchor(k);
    let value = serde_json::json!({
        "nu": anchor.nu.entries().iter().map(polygon::rational_to_string).collect::<Vec<_>>(),
        "etale_type": anchor.etale_type.entries(),
        "hodge_degree": anchor.hodge_degree,
        "hodge_tate_degree": anchor.hodge_tate_degree,
    });
    json_to_py(py, &value)
}

#[pyfunction]
fn admissibility_report(
    py: Python<'_>,
    nu: Vec<String>,
    etale_type: Vec<i64>,
) -> PyResult<Py<PyAny>> {
    let report =
        polygon::admissibility_report(&parse_slopes(&nu)?, &CocharType::new(etale_type))
            .map_err(err)?;
    let value = serde_json::json!({
        "newton": report.newton.entries().iter().map(polygon::rational_to_string).collect::<Vec<_>>(),
        "etale_type": report.etale_type.entries(),
        "de_rham_type": report.de_rham_type.entries(),
        "bundle_slopes": report.bundle_slopes.entries().iter().map(polygon::rational_to_string).collect::<Vec<_>>(),
        "modified_degree": polygon::rational_to_string(&report.modified_degree),
        "weight": polygon::rational_to_string(&report.weight),
        "degree_zero": report.degree_zero,
        "mazur_ok": report.mazur_ok,
        "verdict_necessary": report.verdict_necessary,
    });
    json_to_py(py, &value)
}

#[pyfunction]
fn polygon_of(py: Python<'_>, slopes: Vec<String>) -> PyResult<Py<PyAny>> {
    let poly = polygon::polygon_of_slopes(&parse_slopes(&slopes)?);
    json_to_py(py, &wire::polygon_to_value(&poly))
}

/// Run one named verification suite with a seeded configuration; the field
/// is "Q" or "Fp:<prime>". Returns the suite report as a dictionary.
#[pyfunction]
#[pyo3(signature = (name, seed=0, trials=500, dim_max=4, window=3, field="Q"))]
fn verify(
    py: Python<'_>,
    name: &str,
    seed: u64,
    trials: u32,
    dim_max: usize,
    window: i64,
    field: &str,
) -> PyResult<Py<PyAny>> {
    let field = match field {
        "Q" => FieldChoice::Rationals,
        other => match other.strip_prefix("Fp:") {
            Some(p) => FieldChoice::Prime(
                p.parse()
                    .map_err(|_| PyValueError::new_err(format!("bad prime {p:?}")))?,
            ),
            None => {
                return Err(PyValueError::new_err(format!(
                    "unknown field {other:?}: use Q or Fp:<prime>"
                )))
            }
        },
    };
    let cfg = TrialConfig {
        seed,
        trials,
        dim_max,
        valuation_window: window,
        field,
    };
    let report = run_suite(name, &cfg).map_err(err)?;
    json_to_py(py, &report.to_value())
}

#[pyfunction]
fn suite_names() -> Vec<String> {
    latticework::harness::SUITE_NAMES
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn parse_slopes(raw: &[String]) -> PyResult<polygon::SlopeVector> {
    let parsed = raw
        .iter()
        .map(|s| latticework::field::parse_big_rational(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    polygon::SlopeVector::new(parsed).map_err(err)
}

#[pymodule]
fn latticework_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalar>()?;
    m.add_class::<PyLattice>()?;
    m.add_class::<PyBilattice>()?;
    m.add_function(wrap_pyfunction!(is_good, m)?)?;
    m.add_function(wrap_pyfunction!(rees_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(dominance_leq, m)?)?;
    m.add_function(wrap_pyfunction!(is_minuscule, m)?)?;
    m.add_function(wrap_pyfunction!(mazur_member, m)?)?;
    m.add_function(wrap_pyfunction!(basic_element, m)?)?;
    m.add_function(wrap_pyfunction!(is_compact_mod_center, m)?)?;
    m.add_function(wrap_pyfunction!(is_basic_for_shape, m)?)?;
    m.add_function(wrap_pyfunction!(tate_anchor, m)?)?;
    m.add_function(wrap_pyfunction!(admissibility_report, m)?)?;
    m.add_function(wrap_pyfunction!(polygon_of, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(suite_names, m)?)?;
    Ok(())
}
