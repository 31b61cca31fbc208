use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tubegeo::base_geometry::{catalog_names, from_catalog, load_domain, parse_domain};
use tubegeo::linalg::{rvec, unit, RVec};
use tubegeo::{BaseDomain, Error};

fn smooth_catalog() -> Vec<BaseDomain> {
    catalog_names().iter().map(|n| from_catalog(n).unwrap()).filter(|d| d.is_smooth()).collect()
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> RVec {
    loop {
        let v = RVec::from_iterator(n, (0..n).map(|_| rng.gen_range(-1.0..1.0)));
        if let Some(u) = unit(&v) {
            return u;
        }
    }
}

#[test]
fn gauss_map_inverts_support_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for dom in smooth_catalog() {
        for _ in 0..50 {
            let u = random_unit(dom.dim(), &mut rng);
            let x = dom.support_point(&u).unwrap();
            assert!(dom.rho(&x).abs() <= 1e-9, "{}", dom.label());
            let nu = dom.gauss_map(&x).unwrap();
            assert!((nu - &u).norm() <= 1e-8, "{}", dom.label());
        }
    }
}

#[test]
fn support_point_is_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for dom in smooth_catalog() {
        let u = random_unit(dom.dim(), &mut rng);
        let a = dom.support_point(&u).unwrap();
        let b = dom.support_point(&(&u * 7.5)).unwrap();
        assert!((a - b).norm() < 1e-12, "{}", dom.label());
    }
}

#[test]
fn support_point_maximises_over_boundary_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for dom in smooth_catalog() {
        let u = random_unit(dom.dim(), &mut rng);
        let best = dom.support_point(&u).unwrap().dot(&u);
        for _ in 0..1000 {
            let y = dom.sample_boundary(&mut rng);
            assert!(y.dot(&u) <= best + 1e-10, "{}", dom.label());
        }
    }
}

#[test]
fn ellipsoid_support_point_against_dense_grid() {
    let e = BaseDomain::ellipsoid(&[0.0, 0.0], &[2.0, 1.0]).unwrap();
    let v = rvec(&[1.0, 1.0]);
    let x = e.support_point(&v).unwrap();
    let (mut best, mut arg) = (f64::NEG_INFINITY, 0.0);
    for j in 0..200_000 {
        let t = std::f64::consts::TAU * j as f64 / 200_000.0;
        let val = 2.0 * t.cos() + t.sin();
        if val > best {
            best = val;
            arg = t;
        }
    }
    let grid = rvec(&[2.0 * arg.cos(), arg.sin()]);
    assert!((x - grid).norm() < 1e-4);
}

#[test]
fn boundary_intersection_lands_on_the_boundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for dom in smooth_catalog() {
        for _ in 0..50 {
            let x = dom.sample_interior(&mut rng, 0.9);
            let d = random_unit(dom.dim(), &mut rng);
            let t = dom.boundary_intersection(&x, &d).unwrap();
            assert!(t > 0.0 && t <= 2.0 * dom.bounding_radius());
            assert!(dom.rho(&(&x + &d * t)).abs() <= 1e-10, "{}", dom.label());
            assert!(dom.contains(&(&x + &d * (0.999 * t))));
        }
    }
}

#[test]
fn strict_convexity_by_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for dom in smooth_catalog() {
        for _ in 0..200 {
            let (x, y) = (dom.sample_boundary(&mut rng), dom.sample_boundary(&mut rng));
            if (&x - &y).norm() < 1e-6 {
                continue;
            }
            assert!(dom.rho(&((x + y) * 0.5)) < 0.0, "{}", dom.label());
        }
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let e = BaseDomain::ellipsoid(&[0.0, 0.0], &[2.0, 1.0]).unwrap();
    let x = rvec(&[2.0, 0.0]);
    let nu = e.gauss_map(&x).unwrap();
    assert!((nu - rvec(&[1.0, 0.0])).norm() < 1e-14);
    let p = rvec(&[0.7, -0.4]);
    let g = e.grad_rho(&p);
    let h = 1e-6;
    for i in 0..2 {
        let mut a = p.clone();
        let mut b = p.clone();
        a[i] += h;
        b[i] -= h;
        let fd = (e.rho(&a) - e.rho(&b)) / (2.0 * h);
        assert!((fd - g[i]).abs() < 1e-7);
    }
}

#[test]
fn gauss_map_rejects_interior_points() {
    let ball = BaseDomain::unit_ball(2);
    assert!(matches!(ball.gauss_map(&rvec(&[0.5, 0.0])), Err(Error::Domain(_))));
    assert!(matches!(ball.support_point(&rvec(&[0.0, 0.0])), Err(Error::Argument(_))));
}

#[test]
fn domain_files_round_trip_through_the_loader() {
    let dir = std::env::temp_dir().join("tubegeo_base_geometry_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("wide.dom");
    std::fs::write(&path, "kind = ellipsoid\nn = 2\naxes = 1.0, 0.5\n").unwrap();
    let d = load_domain(path.to_str().unwrap()).unwrap();
    assert_eq!(d.label(), "wide");
    assert!(d.contains(&rvec(&[0.9, 0.0])) && !d.contains(&rvec(&[0.0, 0.6])));
    assert!(matches!(load_domain("no-such-domain"), Err(Error::Parse(_))));
    assert!(matches!(parse_domain("kind = ellipsoid\naxes = 1, x\n"), Err(Error::Parse(_))));
}
