use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tubegeo::base_geometry::from_catalog;
use tubegeo::geodesic_family::*;
use tubegeo::linalg::{cvec, rvec, CVec, RVec};
use tubegeo::BaseDomain;

fn params(re_a: &[f64], im_a: &[f64], b: &[f64]) -> GeodesicParams {
    GeodesicParams::from_parts(re_a, im_a, b, &vec![0.0; b.len()]).unwrap()
}

#[test]
fn scaling_the_pair_changes_nothing() {
    let a = cvec(&[Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4)]);
    let b = rvec(&[0.5, 0.2]);
    let m = rvec(&[0.1, -0.7]);
    let p = GeodesicParams::new(a.clone(), b.clone(), m.clone()).unwrap();
    let q = GeodesicParams::new(a * Complex64::new(3.7, 0.0), b * 3.7, m).unwrap();
    assert!((p.a() - q.a()).iter().all(|c| c.norm() < 1e-15));
    assert!((p.b() - q.b()).norm() < 1e-15);
    assert_eq!(p.case_label(), q.case_label());
    let dom = from_catalog("ellipsoid2").unwrap();
    let (f, g) = (GeodesicMap::new(&dom, p).unwrap(), GeodesicMap::new(&dom, q).unwrap());
    let lam = Complex64::new(0.2, -0.5);
    assert!((f.eval(lam).unwrap() - g.eval(lam).unwrap()).iter().all(|c| c.norm() < 1e-10));
}

#[test]
fn conj_lambda_h_is_real_on_the_circle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = cvec(&[Complex64::new(0.4, -0.3), Complex64::new(0.1, 0.8), Complex64::new(-0.6, 0.2)]);
    let b = rvec(&[0.3, -0.1, 0.5]);
    for _ in 0..100 {
        let t = rng.gen_range(0.0..TAU);
        let lam = Complex64::from_polar(1.0, t);
        let v = h_poly(&a, &b, lam).map(|c| c * lam.conj());
        let ft = f_tilde(&a, &b, t);
        for i in 0..3 {
            assert!(v[i].im.abs() <= 1e-14);
            assert!((v[i].re - ft[i]).abs() <= 1e-14);
        }
    }
}

#[test]
fn profile_satisfies_the_defining_property() {
    let dom = from_catalog("superellipse2").unwrap();
    for p in [params(&[0.5, 0.0], &[0.0, 0.5], &[0.1, 0.0]), params(&[0.5, 0.0], &[0.0, 0.0], &[0.0, 0.0])] {
        let prof = boundary_profile(&dom, &p, 512).unwrap();
        for (t, g) in prof.angles().iter().zip(prof.values()) {
            let Some(g) = g else {
                assert!(p.direction(*t).is_none() || prof.singular_points().iter().any(|s| (s - t).abs() < 1e-9));
                continue;
            };
            assert!(dom.rho(g).abs() <= 1e-8);
            let nu = dom.gauss_map(g).unwrap();
            let dir = p.direction(*t).unwrap();
            assert!(nu.dot(&dir) >= 1.0 - 1e-8);
        }
    }
}

#[test]
fn doubling_the_grid_changes_little_for_smooth_profiles() {
    let dom = from_catalog("ellipsoid2").unwrap();
    let p = params(&[0.4, 0.1], &[-0.1, 0.5], &[0.2, 0.3]);
    assert_eq!(p.case_label(), FCaseLabel::CircleEmbedding);
    let coarse = boundary_profile(&dom, &p, 512).unwrap();
    let fine = boundary_profile(&dom, &p, 1024).unwrap();
    let m = RVec::zeros(2);
    for lam in [Complex64::new(0.0, 0.0), Complex64::new(0.3, 0.2), Complex64::from_polar(0.5, 2.0)] {
        let a = coarse.schwarz_integral(&m, lam).unwrap();
        let b = fine.schwarz_integral(&m, lam).unwrap();
        assert!((a - b).iter().all(|c| c.norm() <= 1e-9));
    }
}

#[test]
fn real_parts_stay_in_the_base() {
    let dom = from_catalog("ellipsoid3").unwrap();
    let p = params(&[0.3, -0.2, 0.1], &[0.1, 0.4, -0.3], &[0.2, 0.0, -0.1]);
    let f = GeodesicMap::new(&dom, p).unwrap();
    for r in [0.0, 0.5, 0.9, 0.99, 0.999] {
        let lams: Vec<Complex64> = (0..16).map(|j| Complex64::from_polar(r, TAU * j as f64 / 16.0)).collect();
        for v in f.eval_many(&lams).unwrap() {
            assert!(dom.rho(&tubegeo::linalg::re(&v)) < 0.0);
        }
    }
}

#[test]
fn rotating_base_and_parameters_rotates_the_profile() {
    let dom = from_catalog("ellipsoid2").unwrap();
    let th: f64 = 0.7;
    let r = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
    let rotated = dom.transform_affine(&r, &RVec::zeros(2)).unwrap();
    let p = params(&[0.4, 0.1], &[-0.1, 0.5], &[0.2, 0.3]);
    let re_a = &r * tubegeo::linalg::re(p.a());
    let im_a = &r * tubegeo::linalg::im(p.a());
    let b = &r * p.b();
    let q = GeodesicParams::from_parts(re_a.as_slice(), im_a.as_slice(), b.as_slice(), &[0.0, 0.0]).unwrap();
    let (g, h) = (boundary_profile(&dom, &p, 128).unwrap(), boundary_profile(&rotated, &q, 128).unwrap());
    for (x, y) in g.values().iter().zip(h.values()) {
        let (x, y) = (x.as_ref().unwrap(), y.as_ref().unwrap());
        assert!((&r * x - y).norm() < 1e-9);
    }
}

#[test]
fn ball_profiles_are_the_normalised_directions() {
    let ball = BaseDomain::unit_ball(2);
    let p = params(&[0.5, 0.0], &[0.0, 0.5], &[0.0, 0.0]);
    let prof = boundary_profile(&ball, &p, 64).unwrap();
    for (t, g) in prof.angles().iter().zip(prof.values()) {
        let g = g.as_ref().unwrap();
        assert!((g - rvec(&[t.cos(), -t.sin()])).norm() < 1e-12);
    }
    let two = params(&[0.5, 0.0], &[0.0, 0.0], &[0.0, 0.0]);
    let prof = boundary_profile(&ball, &two, 64).unwrap();
    for (t, g) in prof.angles().iter().zip(prof.values()) {
        if let Some(g) = g {
            let expect = if t.cos() > 0.0 { 1.0 } else { -1.0 };
            assert!((g - rvec(&[expect, 0.0])).norm() < 1e-12);
        }
    }
}

#[test]
fn ellipsoid_profile_uses_the_support_point() {
    let e = BaseDomain::ellipsoid(&[0.0, 0.0], &[2.0, 1.0]).unwrap();
    let p = params(&[0.5, 0.0], &[0.0, 0.5], &[0.0, 0.0]);
    let prof = boundary_profile(&e, &p, 64).unwrap();
    for (t, g) in prof.angles().iter().zip(prof.values()) {
        let v = rvec(&[t.cos(), -t.sin()]);
        let (a1, a2) = (2.0, 1.0);
        let den = (a1 * a1 * v[0] * v[0] + a2 * a2 * v[1] * v[1]).sqrt();
        let expect = rvec(&[a1 * a1 * v[0] / den, a2 * a2 * v[1] / den]);
        assert!((g.as_ref().unwrap() - expect).norm() < 1e-12);
    }
}

#[test]
fn two_arc_schwarz_integral_is_centred() {
    let ball = BaseDomain::unit_ball(2);
    let p = GeodesicParams::from_parts(&[0.5, 0.0], &[0.0, 0.0], &[0.0, 0.0], &[0.0, 0.3]).unwrap();
    let f = GeodesicMap::new(&ball, p).unwrap();
    let v = f.eval(Complex64::new(0.0, 0.0)).unwrap();
    assert!(v[0].norm() < 1e-12);
    assert!(v[1].re.abs() < 1e-12 && (v[1].im - 0.3).abs() < 1e-12);
}

#[test]
fn one_singular_point_case() {
    // ellipse image through the origin: F̃ = (cos t − 1, −sin t)
    let p = params(&[0.5, 0.0], &[0.0, 0.5], &[-1.0, 0.0]);
    assert_eq!(p.case_label(), FCaseLabel::OpenSemicircle);
    assert_eq!(p.singular_points().len(), 1);
    assert!(p.singular_points()[0].abs() < 1e-9 || (p.singular_points()[0] - TAU).abs() < 1e-9);
    let (l, r) = p.one_sided_directions(p.singular_points()[0]);
    assert!((l + r).norm() < 1e-9);
    let ball = BaseDomain::unit_ball(2);
    let LimitReport::Singular { points, label } = boundary_limits(&ball, &p).unwrap() else { panic!() };
    assert_eq!(label, FCaseLabel::OpenSemicircle);
    assert!(points[0].segment_distance <= 1e-6, "{:?}", points[0]);
    // a segment image with 0 at its end is excluded
    let end = GeodesicParams::from_parts(&[0.5, 0.0], &[0.0, 0.0], &[1.0, 0.0], &[0.0, 0.0]);
    assert!(matches!(end, Err(tubegeo::Error::DegenerateParams(_))));
}

#[test]
fn limits_for_each_case() {
    let ball = BaseDomain::unit_ball(3);
    let circle = params(&[0.5, 0.0, 0.0], &[0.0, 0.5, 0.0], &[0.0, 0.0, 2.0]);
    let arc = params(&[0.25, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0]);
    let two = params(&[0.5, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]);
    assert_eq!(classify_case(&circle), FCaseLabel::CircleEmbedding);
    assert_eq!(classify_case(&arc), FCaseLabel::SmallArc);
    assert_eq!(classify_case(&two), FCaseLabel::TwoAntipodalValues);
    for p in [&circle, &arc] {
        match boundary_limits(&ball, p).unwrap() {
            LimitReport::Continuous { max_boundary_residual, .. } => assert!(max_boundary_residual < 1e-6),
            other => panic!("expected continuity, got {:?}", other),
        }
    }
    let LimitReport::Singular { points, .. } = boundary_limits(&ball, &two).unwrap() else { panic!() };
    let xs: Vec<RVec> = points.iter().map(|p| rvec(&p.x_plus)).collect();
    assert!((&xs[0] + &xs[1]).norm() < 1e-9);
    for p in &points {
        assert!(p.segment_distance <= 1e-6);
        assert!((rvec(&p.x_plus) + rvec(&p.x_minus)).norm() < 1e-9);
    }
    assert_eq!(points[0].imag_sign, -points[1].imag_sign);
}

#[test]
fn symmetrize_examples() {
    let v = rvec(&[0.3, -0.2]);
    let f = FnDisc::new(2, move |l: Complex64| {
        CVec::from_iterator(2, v.iter().zip([0.4, -1.1]).map(|(x, m)| l * *x + Complex64::new(0.0, m)))
    });
    let s = symmetrize(f);
    let lam = Complex64::new(0.2, 0.6);
    let out = s.eval(lam).unwrap();
    assert!((out[0] - lam * 0.3).norm() < 1e-15 && (out[1] - lam * -0.2).norm() < 1e-15);

    let ball = BaseDomain::unit_ball(2);
    let real = GeodesicMap::new(&ball, params(&[0.3, 0.1], &[0.0, 0.0], &[0.2, -0.1])).unwrap();
    let sym = symmetrize(real.clone());
    for lam in [Complex64::new(0.5, 0.0), Complex64::new(-0.3, 0.4)] {
        let d = sym.eval(lam).unwrap() - real.eval(lam).unwrap();
        assert!(d.iter().all(|c| c.norm() < 1e-12));
    }
    for r in [-0.9, -0.2, 0.6] {
        let val = sym.eval(Complex64::new(r, 0.0)).unwrap();
        assert!(val.iter().all(|c| c.im.abs() < 1e-10));
    }
}
