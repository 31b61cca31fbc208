use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use tubegeo::base_geometry::{catalog_names, load_domain};
use tubegeo::geodesic_family::DiscMap;
use tubegeo::geodesic_solver::{self, GeodesicTrace};
use tubegeo::gromov;
use tubegeo::linalg::rvec;
use tubegeo::metrics;
use tubegeo::reference_models;
use tubegeo::{BaseDomain, Error, TubePoint};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Numeric { .. } | Error::DegenerateParams(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn domain(name: &str) -> PyResult<BaseDomain> {
    load_domain(name).map_err(to_py)
}

fn point(p: Vec<Complex64>) -> TubePoint {
    TubePoint::from_complex(p)
}

/// Names accepted wherever a domain is expected (a domain file path works too).
#[pyfunction]
fn catalog() -> Vec<&'static str> {
    catalog_names().to_vec()
}

/// Kobayashi distance between two points of the tube over `domain`.
#[pyfunction]
fn kobayashi_distance(domain_name: &str, w: Vec<Complex64>, z: Vec<Complex64>) -> PyResult<f64> {
    let d = domain(domain_name)?;
    geodesic_solver::kobayashi_distance(&d, &point(w), &point(z)).map_err(to_py)
}

/// `(affine lower bound, polynomial-disc upper bound)` for the distance.
#[pyfunction]
#[pyo3(signature = (domain_name, w, z, degree = 4))]
fn distance_bounds(domain_name: &str, w: Vec<Complex64>, z: Vec<Complex64>, degree: usize) -> PyResult<(f64, f64)> {
    let d = domain(domain_name)?;
    let (w, z) = (point(w), point(z));
    let lower = metrics::affine_lower_bound(&d, &w, &z, 64).map_err(to_py)?;
    let upper = metrics::lempert_upper_bound(&d, &w, &z, degree).map_err(to_py)?;
    Ok((lower, upper.value))
}

/// Hilbert distance of the base between real points.
#[pyfunction]
fn hilbert_distance(domain_name: &str, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    let d = domain(domain_name)?;
    metrics::hilbert_distance(&d, &rvec(&x), &rvec(&y)).map_err(to_py)
}

/// Poincaré distance on the unit disc.
#[pyfunction]
fn poincare(a: Complex64, b: Complex64) -> PyResult<f64> {
    metrics::poincare(a, b).map_err(to_py)
}

/// Four-point value from the six distances in the order xy, xz, xw, yz, yw, zw.
#[pyfunction]
fn four_point(d: [f64; 6]) -> f64 {
    gromov::s_from_distances(&d)
}

/// `S` of the bidisc quadruple `(r,0), (0,r), (−r,0), (0,−r)`.
#[pyfunction]
fn polydisc_witness(r: f64) -> PyResult<f64> {
    gromov::polydisc_witness(r).map(|q| q.s()).map_err(to_py)
}

/// Distance of the tube over `{x₁ > x₂²}`.
#[pyfunction]
fn siegel_distance(z: Vec<Complex64>, w: Vec<Complex64>) -> PyResult<f64> {
    reference_models::siegel_distance(&z, &w).map_err(to_py)
}

/// A complex geodesic `f` with `f(0) = w` and `f(s) = z`.
#[pyclass(name = "Geodesic", unsendable)]
struct PyGeodesic {
    trace: GeodesicTrace,
}

#[pymethods]
impl PyGeodesic {
    #[new]
    fn new(domain_name: &str, w: Vec<Complex64>, z: Vec<Complex64>) -> PyResult<Self> {
        let d = domain(domain_name)?;
        let trace = geodesic_solver::connect(&d, &point(w), &point(z)).map_err(to_py)?;
        Ok(PyGeodesic { trace })
    }

    #[getter]
    fn s(&self) -> Option<f64> {
        self.trace.s()
    }

    #[getter]
    fn distance(&self) -> Option<f64> {
        self.trace.kobayashi()
    }

    #[getter]
    fn case_label(&self) -> String {
        self.trace.case_label().to_string()
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.trace.max_residual()
    }

    fn __call__(&self, lam: Complex64) -> PyResult<Vec<Complex64>> {
        let v = self.trace.map.eval(lam).map_err(to_py)?;
        Ok(v.iter().copied().collect())
    }
}

#[pymodule]
pub fn tubegeo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(kobayashi_distance, m)?)?;
    m.add_function(wrap_pyfunction!(distance_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_distance, m)?)?;
    m.add_function(wrap_pyfunction!(poincare, m)?)?;
    m.add_function(wrap_pyfunction!(four_point, m)?)?;
    m.add_function(wrap_pyfunction!(polydisc_witness, m)?)?;
    m.add_function(wrap_pyfunction!(siegel_distance, m)?)?;
    m.add_class::<PyGeodesic>()?;
    Ok(())
}
