//! Python bindings. Exact rationals cross the boundary as `fractions.Fraction`
//! and the distinguished infinite value as `float('inf')`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyFloat, PyList, PyTuple};

use tropsing::covolume::{self, bernstein_bound, kushnirenko_bound, monomial_map_multiplicity};
use tropsing::dequant::{self, DEFAULT_TOLERANCE};
use tropsing::germ::{parse_support_json, SupportDocument};
use tropsing::invariants;
use tropsing::oracle;
use tropsing::rational::{format_rational, parse_rational};
use tropsing::{ExponentPoint, ExtRational, GermSupport, MapSpec, NewtonPolyhedron, Q};

create_exception!(tropsing, TropsingError, PyValueError);
create_exception!(tropsing, ParseError, TropsingError);

fn err(e: tropsing::Error) -> PyErr {
    match e {
        tropsing::Error::Parse(p) => ParseError::new_err(p.to_string()),
        other => TropsingError::new_err(other.to_string()),
    }
}

fn parse_err(e: tropsing::ParseError) -> PyErr {
    ParseError::new_err(e.to_string())
}

/// Accepts `int`, `Fraction`, `str` ("p/q" or decimal) or `float` (read through its repr).
fn to_q(obj: &Bound<'_, PyAny>) -> PyResult<Q> {
    let text: String = obj.str()?.extract()?;
    parse_rational(&text).map_err(parse_err)
}

fn to_qs(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Q>> {
    objs.iter().map(to_q).collect()
}

fn fraction<'py>(py: Python<'py>, x: &Q) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(x),))
}

fn ext<'py>(py: Python<'py>, x: &ExtRational) -> PyResult<Bound<'py, PyAny>> {
    match x {
        ExtRational::Finite(v) => fraction(py, v),
        ExtRational::Infinite => Ok(PyFloat::new(py, f64::INFINITY).into_any()),
        ExtRational::NegInfinite => Ok(PyFloat::new(py, f64::NEG_INFINITY).into_any()),
    }
}

fn fractions<'py>(py: Python<'py>, xs: &[Q]) -> PyResult<Bound<'py, PyTuple>> {
    let items = xs.iter().map(|x| fraction(py, x)).collect::<PyResult<Vec<_>>>()?;
    PyTuple::new(py, items)
}

fn points(dim: usize, rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Vec<ExponentPoint>> {
    rows.into_iter()
        .map(|row| {
            if row.len() != dim {
                return Err(ParseError::new_err(format!(
                    "point has {} coordinates, expected {dim}",
                    row.len()
                )));
            }
            ExponentPoint::new(to_qs(&row)?).map_err(parse_err)
        })
        .collect()
}

fn json_to_py<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((value.to_string(),))
}

/// Support of an analytic germ, optionally with coefficients.
#[pyclass(module = "tropsing", name = "Germ", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyGerm {
    inner: GermSupport,
}

#[pymethods]
impl PyGerm {
    #[new]
    fn new(n: usize, support: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let inner = GermSupport::new(n, points(n, support)?).map_err(parse_err)?;
        Ok(PyGerm { inner })
    }

    /// Parses a polynomial in `x1..xn`, keeping its coefficients.
    #[staticmethod]
    fn parse(text: &str, n: usize) -> PyResult<Self> {
        let inner = tropsing::parse_polynomial(text, n).map_err(parse_err)?;
        Ok(PyGerm { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match parse_support_json(text).map_err(parse_err)? {
            SupportDocument::Germ(inner) => Ok(PyGerm { inner }),
            SupportDocument::Map(_) => Err(ParseError::new_err("document describes a map")),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn support<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let rows = self
            .inner
            .points()
            .map(|p| fractions(py, p.coords()))
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    }

    fn is_singular(&self) -> bool {
        self.inner.is_singular()
    }

    fn polyhedron(&self) -> PyPolyhedron {
        PyPolyhedron {
            inner: NewtonPolyhedron::from_support(&self.inner),
        }
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Germ({})", self.inner.to_json())
    }
}

/// A Newton polyhedron `conv(vertices) + R_+^n`.
#[pyclass(module = "tropsing", name = "Polyhedron", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyPolyhedron {
    inner: NewtonPolyhedron,
}

#[pymethods]
impl PyPolyhedron {
    #[new]
    fn new(n: usize, points_: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let inner = NewtonPolyhedron::reduce(n, points(n, points_)?).map_err(err)?;
        Ok(PyPolyhedron { inner })
    }

    #[staticmethod]
    fn empty(n: usize) -> Self {
        PyPolyhedron {
            inner: NewtonPolyhedron::empty(n),
        }
    }

    #[staticmethod]
    fn orthant(n: usize) -> Self {
        PyPolyhedron {
            inner: NewtonPolyhedron::orthant(n),
        }
    }

    /// Polyhedron of the directional weight with the given positive coordinates.
    #[staticmethod]
    fn directional_weight(a: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let w = tropsing::Weight::new(to_qs(&a)?).map_err(err)?;
        Ok(PyPolyhedron {
            inner: invariants::directional_weight_polyhedron(&w),
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let rows = self
            .inner
            .vertices()
            .iter()
            .map(|v| fractions(py, v.coords()))
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    }

    /// `(normal, offset)` pairs with `⟨normal, x⟩ >= offset` on the polyhedron.
    #[getter]
    fn facets<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let rows = self
            .inner
            .facets()
            .iter()
            .map(|f| {
                let normal = fractions(py, &f.normal)?.into_any();
                PyTuple::new(py, [normal, fraction(py, &f.offset)?])
            })
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    }

    fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    fn contains(&self, point: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        let p = ExponentPoint::new(to_qs(&point)?).map_err(parse_err)?;
        self.inner.member(&p).map_err(err)
    }

    fn trop_add(&self, other: &Self) -> PyResult<Self> {
        let inner = self.inner.trop_add(&other.inner).map_err(err)?;
        Ok(PyPolyhedron { inner })
    }

    fn trop_mul(&self, other: &Self) -> PyResult<Self> {
        let inner = self.inner.trop_mul(&other.inner).map_err(err)?;
        Ok(PyPolyhedron { inner })
    }

    fn scale(&self, c: &Bound<'_, PyAny>) -> PyResult<Self> {
        let inner = self.inner.scale(&to_q(c)?).map_err(err)?;
        Ok(PyPolyhedron { inner })
    }

    fn __or__(&self, other: &Self) -> PyResult<Self> {
        self.trop_add(other)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.trop_mul(other)
    }

    /// Directional Lelong number; the all-ones weight when `a` is omitted.
    #[pyo3(signature = (a=None))]
    fn nu<'py>(&self, py: Python<'py>, a: Option<Vec<Bound<'py, PyAny>>>) -> PyResult<Bound<'py, PyAny>> {
        let w = match a {
            Some(a) => tropsing::Weight::new(to_qs(&a)?).map_err(err)?,
            None => tropsing::Weight::unit(self.inner.dim()),
        };
        ext(py, &self.inner.directional_number(&w).map_err(err)?)
    }

    fn support_value<'py>(&self, py: Python<'py>, t: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        ext(py, &self.inner.support_value(&to_qs(&t)?).map_err(err)?)
    }

    fn covol<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        ext(py, &covolume::covol(&self.inner).value)
    }

    fn covol_finite(&self) -> bool {
        self.inner.covol_finite()
    }

    fn lambda_indicator<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        ext(py, &invariants::lambda_indicator(&self.inner).lambda)
    }

    fn lct<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        ext(py, &invariants::lct(&self.inner))
    }

    /// Every invariant at once, as a dict of exact strings.
    #[pyo3(signature = (weights=Vec::new()))]
    fn report<'py>(&self, py: Python<'py>, weights: Vec<Vec<Bound<'py, PyAny>>>) -> PyResult<Bound<'py, PyAny>> {
        let ws = weights
            .iter()
            .map(|a| tropsing::Weight::new(to_qs(a)?).map_err(err))
            .collect::<PyResult<Vec<_>>>()?;
        let report = invariants::InvariantReport::compute(&self.inner, &ws).map_err(err)?;
        json_to_py(py, &report.to_json())
    }

    fn to_json(&self) -> String {
        self.inner.to_json(true).to_string()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Polyhedron({})", self.inner)
    }
}

/// A holomorphic map `F = (f_1, …, f_n)`.
#[pyclass(module = "tropsing", name = "Map", frozen)]
pub struct PyMap {
    inner: MapSpec,
}

#[pymethods]
impl PyMap {
    #[new]
    fn new(components: Vec<PyGerm>) -> PyResult<Self> {
        let n = components.first().map_or(0, |g| g.inner.dim());
        let inner = MapSpec::new(n, components.into_iter().map(|g| g.inner).collect()).map_err(parse_err)?;
        Ok(PyMap { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match parse_support_json(text).map_err(parse_err)? {
            SupportDocument::Map(inner) => Ok(PyMap { inner }),
            SupportDocument::Germ(_) => Err(ParseError::new_err("document describes a single germ")),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn polyhedron(&self) -> PyPolyhedron {
        PyPolyhedron {
            inner: covolume::map_polyhedron(&self.inner),
        }
    }

    fn kushnirenko_bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        ext(py, &kushnirenko_bound(&self.inner))
    }

    fn bernstein_bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        ext(py, &bernstein_bound(&self.inner).value)
    }

    /// `|det|` of the exponent matrix; only for maps whose components are single monomials.
    fn multiplicity<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        ext(py, &monomial_map_multiplicity(&self.inner).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Map({})", self.inner.to_json())
    }
}

/// `(sigma, certificates)` for the relative type of `u` with respect to the weight `psi`.
#[pyfunction]
fn relative_type<'py>(
    py: Python<'py>,
    u: &PyPolyhedron,
    psi: &PyPolyhedron,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyList>)> {
    let result = invariants::relative_type(&u.inner, &psi.inner).map_err(err)?;
    let certs = result
        .certificates
        .iter()
        .map(|a| fractions(py, a))
        .collect::<PyResult<Vec<_>>>()?;
    Ok((ext(py, &result.value)?, PyList::new(py, certs)?))
}

#[pyfunction]
fn mixed_covol<'py>(py: Python<'py>, slots: Vec<PyPolyhedron>) -> PyResult<Bound<'py, PyAny>> {
    let slots: Vec<NewtonPolyhedron> = slots.into_iter().map(|p| p.inner).collect();
    ext(py, &covolume::mixed_covol(&slots).map_err(err)?.value)
}

#[pyfunction]
fn staircase_covol_2d<'py>(py: Python<'py>, gamma: &PyPolyhedron) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &oracle::staircase_covol_2d(&gamma.inner).map_err(err)?)
}

/// Monte Carlo covolume estimate as `{"value", "stderr", "samples"}`.
#[pyfunction]
#[pyo3(signature = (gamma, samples=1_000_000, seed=0))]
fn mc_covol<'py>(py: Python<'py>, gamma: &PyPolyhedron, samples: u64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let est = py
        .detach(|| oracle::mc_covol(&gamma.inner, samples, seed))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("value", est.value)?;
    d.set_item("stderr", est.stderr)?;
    d.set_item("samples", est.samples)?;
    Ok(d)
}

/// Best value on the simplex grid with denominator `k`, and its resolution bound.
#[pyfunction]
fn grid_lambda<'py>(
    py: Python<'py>,
    gamma: &PyPolyhedron,
    k: u32,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let est = oracle::grid_lambda(&gamma.inner, k).map_err(err)?;
    let exact = est.exact.expect("grid search is exact");
    let resolution = est.resolution.expect("grid search has a resolution");
    Ok((fraction(py, &exact)?, fraction(py, &resolution)?))
}

#[pyfunction]
#[pyo3(signature = (f, t, m, phases=16, seed=0))]
fn sample_tm(f: &PyGerm, t: Vec<f64>, m: u32, phases: usize, seed: u64) -> PyResult<f64> {
    Ok(dequant::sample_tm(&f.inner, &t, m, phases, seed).map_err(err)?.value)
}

/// Dequantization convergence report as a dict with rows, pass flag and failures.
#[pyfunction]
#[pyo3(signature = (f, grid, m_schedule, phases=16, seed=0, tolerance=DEFAULT_TOLERANCE))]
fn convergence_report<'py>(
    py: Python<'py>,
    f: &PyGerm,
    grid: Vec<Vec<f64>>,
    m_schedule: Vec<u32>,
    phases: usize,
    seed: u64,
    tolerance: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let report = py
        .detach(|| dequant::convergence_report(&f.inner, &grid, &m_schedule, phases, seed, tolerance))
        .map_err(err)?;
    json_to_py(py, &serde_json::to_value(&report).expect("report serializes"))
}

#[pymodule(name = "tropsing")]
fn tropsing_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TropsingError", m.py().get_type::<TropsingError>())?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add_class::<PyGerm>()?;
    m.add_class::<PyPolyhedron>()?;
    m.add_class::<PyMap>()?;
    m.add_function(wrap_pyfunction!(relative_type, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_covol, m)?)?;
    m.add_function(wrap_pyfunction!(staircase_covol_2d, m)?)?;
    m.add_function(wrap_pyfunction!(mc_covol, m)?)?;
    m.add_function(wrap_pyfunction!(grid_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(sample_tm, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_report, m)?)?;
    Ok(())
}
