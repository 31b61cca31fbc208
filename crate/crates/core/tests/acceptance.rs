//! Acceptance run: one PASS/FAIL line per criterion with the measured values.
//! Runs without the libtest harness so the lines reach stdout uncaptured.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tubegeo::base_geometry::{from_catalog, PolytopeBase};
use tubegeo::geodesic_family::{boundary_limits, classify_case, FCaseLabel, GeodesicParams, LimitReport};
use tubegeo::geodesic_solver::{connect, kobayashi_distance, uniqueness_probe, verify_geodesic};
use tubegeo::gromov::{blowup_convergence_check, polydisc_witness, witness_search, BlowupOptions, WitnessOptions, WitnessSpace};
use tubegeo::linalg::rvec;
use tubegeo::metrics::{affine_lower_bound, check_hilbert_inequality, hilbert_distance, lempert_upper_bound};
use tubegeo::reference_models::{example2_check, siegel_check};
use tubegeo::{BaseDomain, TubePoint};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_point(domain: &BaseDomain, rng: &mut ChaCha8Rng) -> TubePoint {
    let re = domain.sample_interior(rng, 0.9);
    let im: Vec<f64> = (0..domain.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    TubePoint::from_parts(&re, &rvec(&im))
}

fn poincare_real(s: f64, t: f64) -> f64 {
    ((s - t) / (1.0 - s * t)).abs().atanh()
}

fn criterion_1() -> Outcome {
    let mut radii = vec![0.5, 0.9, 0.99];
    radii.extend((1..=20).map(|k| 1.0 - 0.5f64.powi(k)));
    let mut worst: f64 = 0.0;
    let mut prev = f64::NEG_INFINITY;
    let mut monotone = true;
    for (i, &r) in radii.iter().enumerate() {
        let s = match polydisc_witness(r) {
            Ok(q) => q.s(),
            Err(e) => return outcome(false, format!("r={r}: {e}")),
        };
        // closed form (1/2) log((1+r)/(1−r)), doubled
        worst = worst.max((s - ((1.0 + r) / (1.0 - r)).ln()).abs());
        if i >= 3 {
            monotone &= s > prev;
            prev = s;
        }
    }
    outcome(worst <= 1e-12 && monotone, format!("max |S - 2 atanh r| = {worst:.2e}, increasing along 1-2^-k: {monotone}"))
}

fn criterion_2() -> Outcome {
    let space = WitnessSpace::IntervalTube { lower: vec![0.0, 0.0], upper: vec![1.0, 1.0] };
    let rep = match witness_search(&space, &WitnessOptions { target: Some(10.0), ..Default::default() }) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let square = PolytopeBase::interval_product(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
    let blow = match blowup_convergence_check(&square, &rvec(&[0.0, 0.0]), &BlowupOptions::dyadic(2, 12)) {
        Ok(b) => b,
        Err(e) => return outcome(false, e.to_string()),
    };
    let gap = blow.gap_at(10).unwrap_or(f64::INFINITY);
    let pass = rep.achieved && gap <= 1e-3 && blow.max_scaling_deviation <= 1e-12;
    outcome(
        pass,
        format!(
            "S reached {:.4} in {} steps, gap at k=10 {:.2e}, scaling deviation {:.2e}",
            rep.level,
            rep.steps.len(),
            gap,
            blow.max_scaling_deviation
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut res, mut bdry, mut align, mut sandwich): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, f64::INFINITY);
    let mut failures = Vec::new();
    let mut count = 0;
    for name in ["ball2", "ball3", "ellipsoid2", "ellipsoid3"] {
        let dom = from_catalog(name).unwrap();
        for i in 0..50 {
            let (w, z) = (random_point(&dom, &mut rng), random_point(&dom, &mut rng));
            count += 1;
            let checked = (|| -> tubegeo::Result<bool> {
                let trace = connect(&dom, &w, &z)?;
                let rep = verify_geodesic(&dom, &trace)?;
                let Some(k) = trace.kobayashi() else { return Ok(false) };
                let lower = affine_lower_bound(&dom, &w, &z, 64)?;
                let upper = lempert_upper_bound(&dom, &w, &z, 4)?.value;
                res = res.max(rep.endpoint_residual);
                bdry = bdry.max(rep.max_boundary_residual);
                align = align.max(rep.max_misalignment);
                let slack = (k - lower).min(upper + 1e-3 - k);
                sandwich = sandwich.min(slack);
                Ok(rep.endpoint_residual <= 1e-6
                    && rep.max_boundary_residual <= 1e-8
                    && rep.max_misalignment <= 1e-6
                    && slack >= 0.0)
            })();
            match checked {
                Ok(true) => {}
                Ok(false) => failures.push(format!("{name}#{i}")),
                Err(e) => failures.push(format!("{name}#{i} ({e})")),
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{count} pairs, endpoint {res:.1e}, boundary {bdry:.1e}, misalignment {align:.1e}, min sandwich slack {sandwich:.1e}, failures {:?}",
            failures
        ),
    )
}

fn criterion_4() -> Outcome {
    let ball = BaseDomain::unit_ball(2);
    let w = TubePoint::real(&[0.0, 0.0]);
    let mut worst: f64 = 0.0;
    for j in 1..=9 {
        let t = j as f64 / 10.0;
        let oracle = (PI * t / 4.0).tan().atanh();
        match kobayashi_distance(&ball, &w, &TubePoint::real(&[t, 0.0])) {
            Ok(d) => worst = worst.max((d - oracle).abs()),
            Err(e) => return outcome(false, format!("t={t}: {e}")),
        }
    }
    outcome(worst <= 1e-5, format!("max |k - atanh(tan(pi t/4))| = {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst_dev: f64 = 0.0;
    let mut worst_imag: f64 = 0.0;
    let mut failures = Vec::new();
    let names = ["ball2", "ellipsoid2", "ellipsoid3", "ball3", "ellipsoid2"];
    for (i, name) in names.iter().enumerate() {
        let dom = from_catalog(name).unwrap();
        // one complex and one real pair per base
        let complex = (random_point(&dom, &mut rng), random_point(&dom, &mut rng));
        let real = (TubePoint::from_parts(&dom.sample_interior(&mut rng, 0.9), &rvec(&vec![0.0; dom.dim()])), TubePoint::from_parts(&dom.sample_interior(&mut rng, 0.9), &rvec(&vec![0.0; dom.dim()])));
        for (j, (w, z)) in [complex, real].iter().enumerate() {
            match uniqueness_probe(&dom, w, z, 8) {
                Ok(rep) => {
                    worst_dev = worst_dev.max(rep.max_profile_deviation);
                    let imag = rep.max_imag_on_diameter.unwrap_or(0.0);
                    worst_imag = worst_imag.max(imag);
                    if !rep.unique(1e-5) || (rep.real_pair && imag > 1e-7) || (j == 1) != rep.real_pair {
                        failures.push(format!("{name}#{i}.{j}"));
                    }
                }
                Err(e) => failures.push(format!("{name}#{i}.{j} ({e})")),
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("10 pairs x 8 restarts, max profile deviation {worst_dev:.1e}, max |Im f| on real diameter {worst_imag:.1e}, failures {failures:?}"),
    )
}

fn criterion_6() -> Outcome {
    let ball = BaseDomain::unit_ball(3);
    let p = |re: &[f64], im: &[f64], b: &[f64]| GeodesicParams::from_parts(re, im, b, &[0.0; 3]).unwrap();
    let families = [
        p(&[0.5, 0.0, 0.0], &[0.0, 0.5, 0.0], &[0.0, 0.0, 2.0]),
        p(&[0.25, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0]),
        p(&[0.5, 0.0, 0.0], &[0.0, 0.5, 0.0], &[-1.0, 0.0, 0.0]),
        p(&[0.5, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]),
    ];
    let want = [FCaseLabel::CircleEmbedding, FCaseLabel::SmallArc, FCaseLabel::OpenSemicircle, FCaseLabel::TwoAntipodalValues];
    let labels_ok = families.iter().zip(&want).all(|(f, w)| classify_case(f) == *w);
    let mut cont: f64 = 0.0;
    let mut seg: f64 = 0.0;
    let mut im_min = f64::INFINITY;
    let mut opposite = true;
    for f in &families {
        match boundary_limits(&ball, f) {
            Ok(LimitReport::Continuous { max_boundary_residual, .. }) => cont = cont.max(max_boundary_residual),
            Ok(LimitReport::Singular { points, label }) => {
                for pt in &points {
                    seg = seg.max(pt.segment_distance);
                }
                if label == FCaseLabel::TwoAntipodalValues {
                    opposite &= points.len() == 2 && points[0].imag_sign == -points[1].imag_sign;
                    for pt in &points {
                        im_min = im_min.min(pt.imag_projection.last().unwrap().abs());
                    }
                }
            }
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let pass = labels_ok && cont <= 1e-6 && seg <= 1e-6 && opposite && im_min > 50.0;
    outcome(
        pass,
        format!(
            "labels {labels_ok}, continuous boundary residual {cont:.1e}, segment distance {seg:.1e}, opposite signs {opposite}, |Im| at r=0.9999 {im_min:.4} (threshold 50)"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for name in ["ball2", "ellipsoid2"] {
        let dom = from_catalog(name).unwrap();
        match check_hilbert_inequality(&dom, 100) {
            Ok(rep) => {
                pass &= rep.passed() && rep.min_slack >= -1e-5 && rep.rows.len() == 100;
                detail.push(format!("{name} min(h - 2k) {:.3e}", rep.min_slack));
            }
            Err(e) => {
                pass = false;
                detail.push(format!("{name}: {e}"));
            }
        }
        // chords through the centre: x = s a, y = t a with −a also on the boundary
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let v = rvec(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            let v = &v / v.norm();
            let a = &v * dom.boundary_intersection(&rvec(&[0.0, 0.0]), &v).unwrap();
            let (s, t) = (rng.gen_range(-0.95..0.95), rng.gen_range(-0.95..0.95));
            let h = hilbert_distance(&dom, &(&a * s), &(&a * t)).unwrap();
            worst = worst.max((h - 2.0 * poincare_real(s, t)).abs());
        }
        pass &= worst <= 1e-9;
        detail.push(format!("{name} collinear |h - 2p(s,t)| {worst:.1e}"));
    }
    outcome(pass, detail.join(", "))
}

fn criterion_8() -> Outcome {
    let (s, e) = match (siegel_check(100), example2_check(1000)) {
        (Ok(s), Ok(e)) => (s, e),
        (Err(err), _) | (_, Err(err)) => return outcome(false, err.to_string()),
    };
    outcome(
        s.passed() && s.max_symmetry_error.max(s.max_triangle_violation) <= 1e-10 && e.passed(),
        format!(
            "Siegel symmetry {:.1e} triangle {:.1e}; Example 2 involution {:.1e}, inequality failures {}, union failures {}",
            s.max_symmetry_error, s.max_triangle_violation, e.max_involution_error, e.inequality_failures, e.union_failures
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 polydisc witness divergence", criterion_1, Duration::from_secs(1)),
        ("2 corner criterion on the square tube", criterion_2, Duration::from_secs(30)),
        ("3 geodesic certificate", criterion_3, Duration::from_secs(300)),
        ("4 slice exactness", criterion_4, Duration::from_secs(60)),
        ("5 uniqueness and reality", criterion_5, Duration::from_secs(300)),
        ("6 continuity classification", criterion_6, Duration::from_secs(60)),
        ("7 Hilbert inequality", criterion_7, Duration::from_secs(300)),
        ("8 reference models", criterion_8, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let pass = out.pass && took <= budget;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.2}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
