use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tubegeo::base_geometry::from_catalog;
use tubegeo::geodesic_family::{DiscMap, FCaseLabel};
use tubegeo::geodesic_solver::*;
use tubegeo::linalg::{basis, rvec};
use tubegeo::metrics::{affine_lower_bound, lempert_upper_bound};
use tubegeo::{BaseDomain, Error, TubePoint};

fn random_point(domain: &BaseDomain, rng: &mut ChaCha8Rng) -> TubePoint {
    let re = domain.sample_interior(rng, 0.9);
    let im: Vec<f64> = (0..domain.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    TubePoint::from_parts(&re, &rvec(&im))
}

fn strip_oracle(t: f64) -> f64 {
    (std::f64::consts::FRAC_PI_4 * t).tan().atanh()
}

#[test]
fn ball_slice_matches_strip_oracle() {
    let ball = BaseDomain::unit_ball(2);
    let w = TubePoint::real(&[0.0, 0.0]);
    for t in [0.2, 0.5, 0.8] {
        let d = kobayashi_distance(&ball, &w, &TubePoint::real(&[t, 0.0])).unwrap();
        assert!((d - strip_oracle(t)).abs() < 1e-6, "t={} d={} oracle={}", t, d, strip_oracle(t));
    }
}

#[test]
fn imaginary_translation_keeps_s() {
    let ball = BaseDomain::unit_ball(2);
    let base = connect(&ball, &TubePoint::real(&[0.0, 0.0]), &TubePoint::real(&[0.5, 0.0])).unwrap();
    let m = [0.7, -1.3];
    let moved = connect(&ball, &TubePoint::new(&[0.0, 0.0], &m), &TubePoint::new(&[0.5, 0.0], &m)).unwrap();
    assert!((base.s().unwrap() - moved.s().unwrap()).abs() < 1e-7);
}

#[test]
fn sandwich_and_certificate_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for name in ["ball2", "ellipsoid2", "ellipsoid3"] {
        let dom = from_catalog(name).unwrap();
        for _ in 0..3 {
            let (w, z) = (random_point(&dom, &mut rng), random_point(&dom, &mut rng));
            let trace = connect(&dom, &w, &z).unwrap();
            assert!(trace.max_residual() <= 1e-6);
            let rep = verify_geodesic(&dom, &trace).unwrap();
            assert!(rep.passed(), "{} {:?}", name, rep);
            let k = trace.kobayashi().unwrap();
            let lower = affine_lower_bound(&dom, &w, &z, 64).unwrap();
            let upper = lempert_upper_bound(&dom, &w, &z, 4).unwrap().value;
            assert!(lower - 1e-9 <= k && k <= upper + 1e-3, "{}: {} <= {} <= {}", name, lower, k, upper);
        }
    }
}

#[test]
fn translation_symmetry_and_triangle() {
    let dom = from_catalog("ellipsoid2").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (x, y, z) = (random_point(&dom, &mut rng), random_point(&dom, &mut rng), random_point(&dom, &mut rng));
    let dxy = kobayashi_distance(&dom, &x, &y).unwrap();
    let dyx = kobayashi_distance(&dom, &y, &x).unwrap();
    assert!((dxy - dyx).abs() < 1e-6);
    let m = rvec(&[2.5, -0.4]);
    let moved = kobayashi_distance(&dom, &x.translate_imag(&m), &y.translate_imag(&m)).unwrap();
    assert!((moved - dxy).abs() < 1e-7);
    let dyz = kobayashi_distance(&dom, &y, &z).unwrap();
    let dxz = kobayashi_distance(&dom, &x, &z).unwrap();
    assert!(dxz <= dxy + dyz + 1e-6);
    assert!(dxy <= dxz + dyz + 1e-6);
    assert!(dyz <= dxy + dxz + 1e-6);
}

#[test]
fn reversed_pair_is_the_same_curve() {
    let dom = from_catalog("ellipsoid2").unwrap();
    let w = TubePoint::new(&[0.2, -0.1], &[0.3, 0.0]);
    let z = TubePoint::new(&[-0.4, 0.3], &[-0.5, 0.6]);
    let fwd = connect(&dom, &w, &z).unwrap();
    let rev = connect(&dom, &z, &w).unwrap();
    let s = fwd.s().unwrap();
    assert!((s - rev.s().unwrap()).abs() < 1e-6);
    // λ ↦ (s − λ)/(1 − sλ) swaps 0 and s
    for lam in [Complex64::new(0.1, 0.2), Complex64::new(-0.5, 0.0), Complex64::new(0.3, -0.6)] {
        let a = rev.map.eval(lam).unwrap();
        let b = fwd.map.eval((s - lam) / (1.0 - s * lam)).unwrap();
        let err = (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(err < 1e-5, "{}", err);
    }
}

#[test]
fn real_pair_gives_real_geodesic() {
    let dom = from_catalog("ellipsoid3").unwrap();
    let w = TubePoint::real(&[0.3, 0.1, -0.2]);
    let z = TubePoint::real(&[-0.5, 0.2, 0.1]);
    let trace = connect(&dom, &w, &z).unwrap();
    assert_eq!(trace.stats.mode, SolveMode::Real);
    let samples: Vec<f64> = (0..21).map(|k| -0.95 + 0.095 * k as f64).collect();
    assert!(trace.max_imag_on_diameter(&samples).unwrap() <= 1e-7);
}

#[test]
fn same_point_distance_and_rejection() {
    let dom = from_catalog("ball2").unwrap();
    let w = TubePoint::new(&[0.1, 0.2], &[1.0, 0.0]);
    assert_eq!(kobayashi_distance(&dom, &w, &w).unwrap(), 0.0);
    assert!(matches!(connect(&dom, &w, &w), Err(Error::Argument(_))));
    assert!(matches!(uniqueness_probe(&dom, &w, &w, 4), Err(Error::Argument(_))));
    let outside = TubePoint::real(&[1.5, 0.0]);
    assert!(matches!(connect(&dom, &w, &outside), Err(Error::Argument(_))));
}

#[test]
fn verification_catches_perturbed_parameters() {
    let dom = from_catalog("ball2").unwrap();
    let trace = connect(&dom, &TubePoint::real(&[0.0, 0.0]), &TubePoint::new(&[0.3, 0.2], &[0.4, -0.1])).unwrap();
    let p = &trace.params;
    let b = p.b() + rvec(&[1e-2, 0.0]);
    let moved = tubegeo::geodesic_family::GeodesicParams::new(p.a().clone(), b, p.im_f0().clone()).unwrap();
    let bad = GeodesicTrace::from_params(&dom, moved, trace.anchors.clone(), trace.stats.clone()).unwrap();
    let rep = verify_geodesic(&dom, &bad).unwrap();
    assert!(rep.on_boundary && rep.aligned);
    assert!(!rep.endpoints, "{:?}", rep);
}

#[test]
fn verification_catches_interior_profile() {
    let dom = from_catalog("ball2").unwrap();
    let mut trace = connect(&dom, &TubePoint::real(&[0.0, 0.0]), &TubePoint::real(&[0.0, 0.4])).unwrap();
    let shrunk: Vec<_> = trace.profile.values().iter().map(|v| v.as_ref().map(|g| g * 0.5)).collect();
    trace.profile = trace.profile.with_values(shrunk).unwrap();
    let rep = verify_geodesic(&dom, &trace).unwrap();
    assert!(!rep.on_boundary);
    assert!(!rep.passed());
}

#[test]
fn boundary_geodesic_through_antipodes() {
    let ball = BaseDomain::unit_ball(2);
    let (x, y) = (basis(2, 0), -basis(2, 0));
    let trace = connect_boundary(&ball, &x, &y).unwrap();
    let a = trace.params.a();
    // a ∝ −e₁/2, b = 0
    assert!(a[0].re < 0.0 && a[0].im.abs() < 1e-15 && a[1].norm() < 1e-15);
    assert!(trace.params.b().norm() < 1e-15);
    assert_eq!(trace.case_label(), FCaseLabel::TwoAntipodalValues);
    assert!(trace.max_residual() <= 1e-6, "{:?}", trace.residuals);
}

#[test]
fn boundary_geodesic_between_orthogonal_points() {
    let ball = BaseDomain::unit_ball(2);
    let (x, y) = (basis(2, 0), basis(2, 1));
    let trace = connect_boundary(&ball, &x, &y).unwrap();
    let p = &trace.params;
    let dm1 = p.direction(std::f64::consts::PI).unwrap();
    let d1 = p.direction(0.0).unwrap();
    assert!((dm1 - &x).norm() < 1e-14 && (d1 - &y).norm() < 1e-14);
    assert!(trace.max_residual() <= 1e-6, "{:?}", trace.residuals);
    assert!(verify_geodesic(&ball, &trace).unwrap().passed());

    let swapped = connect_boundary(&ball, &y, &x).unwrap();
    assert!((swapped.params.a() + p.a()).iter().all(|c| c.norm() < 1e-14));
    assert!((swapped.params.b() - p.b()).norm() < 1e-14);
    let lam = Complex64::new(0.3, 0.4);
    let diff = swapped.map.eval(-lam).unwrap() - trace.map.eval(lam).unwrap();
    assert!(diff.iter().all(|c| c.norm() < 1e-9));
}

#[test]
fn boundary_requires_distinct_boundary_points() {
    let ball = BaseDomain::unit_ball(2);
    let x = basis(2, 0);
    assert!(matches!(connect_boundary(&ball, &x, &x), Err(Error::Domain(_))));
    assert!(connect_boundary(&ball, &(x.clone() * 0.5), &(-x)).is_err());
}

#[test]
fn uniqueness_on_a_ball_pair() {
    let ball = BaseDomain::unit_ball(2);
    let w = TubePoint::new(&[0.1, -0.3], &[0.2, 0.5]);
    let z = TubePoint::new(&[-0.4, 0.2], &[-0.3, 0.1]);
    let rep = uniqueness_probe(&ball, &w, &z, 8).unwrap();
    assert!(rep.converged >= 2);
    assert!(rep.unique(1e-5), "{:?}", rep);
}

#[test]
fn uniqueness_on_a_real_pair_stays_real() {
    let dom = from_catalog("ellipsoid2").unwrap();
    let rep = uniqueness_probe(&dom, &TubePoint::real(&[0.3, 0.2]), &TubePoint::real(&[-0.4, -0.1]), 8).unwrap();
    assert!(rep.real_pair);
    assert!(rep.unique(1e-5), "{:?}", rep);
    assert!(rep.max_imag_on_diameter.unwrap() <= 1e-7);
}

#[test]
fn trace_record_serializes() {
    let ball = BaseDomain::unit_ball(2);
    let trace = connect(&ball, &TubePoint::real(&[0.0, 0.0]), &TubePoint::real(&[0.5, 0.0])).unwrap();
    let rec = trace.record(&[0.0, 0.5], 8, true).unwrap();
    let json = serde_json::to_string(&rec).unwrap();
    assert!(json.contains("case_label") || json.contains("label"));
}
