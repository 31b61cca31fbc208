use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::wrap_pymodule;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn with_module<F: for<'py> FnOnce(&Bound<'py, PyModule>)>(f: F) {
    Python::attach(|py| {
        let m = wrap_pymodule!(tubegeo_py::tubegeo_py)(py);
        f(m.bind(py).cast::<PyModule>().unwrap());
    });
}

#[test]
fn distance_matches_the_strip_value() {
    with_module(|m| {
        let d: f64 = m
            .getattr("kobayashi_distance")
            .unwrap()
            .call1(("ball2", vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.5, 0.0), c(0.0, 0.0)]))
            .unwrap()
            .extract()
            .unwrap();
        assert!((d - (std::f64::consts::PI / 8.0).tan().atanh()).abs() < 1e-9);
    });
}

#[test]
fn outside_points_raise_value_error() {
    with_module(|m| {
        let err = m
            .getattr("kobayashi_distance")
            .unwrap()
            .call1(("ball2", vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(1.5, 0.0), c(0.0, 0.0)]))
            .unwrap_err();
        Python::attach(|py| assert!(err.is_instance_of::<PyValueError>(py)));
    });
}

#[test]
fn geodesic_object_hits_its_anchors() {
    with_module(|m| {
        let w = vec![c(0.1, 0.3), c(-0.2, 0.0)];
        let z = vec![c(-0.3, 0.0), c(0.4, -0.5)];
        let g = m.getattr("Geodesic").unwrap().call1(("ellipsoid2", w.clone(), z.clone())).unwrap();
        let s: f64 = g.getattr("s").unwrap().extract().unwrap();
        let at0: Vec<Complex64> = g.call1((c(0.0, 0.0),)).unwrap().extract().unwrap();
        let at_s: Vec<Complex64> = g.call1((c(s, 0.0),)).unwrap().extract().unwrap();
        for (a, b) in at0.iter().zip(&w).chain(at_s.iter().zip(&z)) {
            assert!((a - b).norm() < 1e-6);
        }
        let label: String = g.getattr("case_label").unwrap().extract().unwrap();
        assert!(!label.is_empty());
    });
}

#[test]
fn witness_and_four_point() {
    with_module(|m| {
        let s: f64 = m.getattr("polydisc_witness").unwrap().call1((0.5,)).unwrap().extract().unwrap();
        assert!((s - 3f64.ln()).abs() < 1e-12);
        let t: f64 = m.getattr("four_point").unwrap().call1(([2.0; 6],)).unwrap().extract().unwrap();
        assert_eq!(t, 0.0);
        let names: Vec<String> = m.getattr("catalog").unwrap().call0().unwrap().extract().unwrap();
        assert!(names.iter().any(|n| n == "ball2"));
    });
}
