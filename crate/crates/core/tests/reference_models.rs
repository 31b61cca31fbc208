use num_complex::Complex64;
use tubegeo::reference_models::*;

#[test]
fn siegel_batch_passes() {
    let rep = siegel_check(100).unwrap();
    assert_eq!(rep.skipped, 0);
    assert!(rep.passed(), "{:?}", rep);
}

#[test]
fn siegel_distance_is_invariant_under_imaginary_translation() {
    let c = Complex64::new;
    let (z, w) = ([c(1.0, 0.3), c(0.4, -0.2)], [c(0.5, -1.0), c(-0.6, 0.9)]);
    let d = siegel_distance(&z, &w).unwrap();
    for m in [(-2.0, 1.0), (0.5, 7.0)] {
        let s = |p: &[Complex64; 2]| [p[0] + c(0.0, m.0), p[1] + c(0.0, m.1)];
        assert!((siegel_distance(&s(&z), &s(&w)).unwrap() - d).abs() < 1e-10);
    }
}

#[test]
fn siegel_roundtrip() {
    let c = Complex64::new;
    let pts = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(2.0, 1.0), c(-1.2, 0.4)]];
    assert!(ModelMap::siegel().roundtrip_error(&pts) <= 1e-12);
}

#[test]
fn example2_batch_passes() {
    let rep = example2_check(1000).unwrap();
    assert!(rep.passed(), "{:?}", rep);
}

#[test]
fn example2_printed_map_is_flagged() {
    let rep = example2_check_with(&Example2Options { printed_map: true, samples: 200, ..Default::default() }).unwrap();
    assert!(rep.max_involution_error > 1e-3);
    assert!(!rep.passed());
    assert!(!rep.counterexamples.is_empty());
}

#[test]
fn example2_printed_discs_miss_the_image() {
    let rep = example2_check_with(&Example2Options { printed_discs: true, samples: 200, ..Default::default() }).unwrap();
    assert_eq!(rep.union_failures, 200);
}

#[test]
fn example2_map_is_an_involution() {
    let m = ModelMap::example2();
    let c = Complex64::new;
    let z = vec![c(3.0, -1.5), c(0.5, 2.0)];
    let back = m.forward(&m.forward(&z));
    assert!(back.iter().zip(&z).all(|(a, b)| (a - b).norm() < 1e-12));
}

#[test]
fn example2_antidiagonal_lies_on_the_boundary() {
    // the segment {(x, −x)} is in the boundary of the image
    for x in [-0.9, -0.3, 0.0, 0.5, 0.8] {
        let p = [Complex64::new(x, 0.0), Complex64::new(-x, 0.0)];
        assert!(example2_margin(&p, false).abs() < 1e-9);
    }
}
