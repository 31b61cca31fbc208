use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tubegeo::base_geometry::{load_domain, PolytopeBase};
use tubegeo::geodesic_solver::{connect, connect_boundary, kobayashi_distance, uniqueness_probe};
use tubegeo::gromov::{blowup_convergence_check, polydisc_witness, witness_search, BlowupOptions, WitnessOptions, WitnessSpace};
use tubegeo::linalg::rvec;
use tubegeo::metrics::{affine_lower_bound, check_hilbert_inequality_with, lempert_upper_bound, model_distance, HilbertCheckOptions, ModelSpace};
use tubegeo::reference_models::{example2_check_with, siegel_check_with, Example2Options, SiegelOptions};
use tubegeo::{BaseDomain, TubePoint};

use crate::config::{Format, RunConfig};
use crate::exit::Failure;
use crate::report::{emit, header, json_text, num, to_value};

const LOWER_SLACK: f64 = 1e-9;
const UPPER_SLACK: f64 = 1e-3;

fn domain(cfg: &RunConfig, default: &str) -> Result<BaseDomain, Failure> {
    Ok(load_domain(cfg.domain.as_deref().unwrap_or(default))?)
}

fn tube_points(cfg: &RunConfig, dom: &BaseDomain, count: usize) -> Result<Vec<TubePoint>, Failure> {
    if cfg.points.len() != count {
        return Err(Failure::Config(format!("expected {} points, got {}", count, cfg.points.len())));
    }
    cfg.points
        .iter()
        .map(|p| {
            if p.len() != dom.dim() {
                return Err(Failure::Config(format!("point has {} coordinates, base has dimension {}", p.len(), dom.dim())));
            }
            let re: Vec<f64> = p.iter().map(|c| c[0]).collect();
            let im: Vec<f64> = p.iter().map(|c| c[1]).collect();
            Ok(TubePoint::new(&re, &im))
        })
        .collect()
}

fn inside(dom: &BaseDomain, pts: &[TubePoint]) -> Result<(), Failure> {
    if pts.iter().all(|p| dom.contains(&p.re())) {
        Ok(())
    } else {
        Err(Failure::Config("point outside base".into()))
    }
}

fn interval_box(dom: &BaseDomain) -> Option<(Vec<f64>, Vec<f64>)> {
    dom.as_polytope().and_then(PolytopeBase::as_interval_product)
}

pub fn distance(cfg: &RunConfig) -> Result<(), Failure> {
    let dom = domain(cfg, "ball2")?;
    let pts = tube_points(cfg, &dom, 2)?;
    inside(&dom, &pts)?;
    let (w, z) = (&pts[0], &pts[1]);
    let (k, s, residuals, method) = if w == z {
        (0.0, 0.0, [0.0, 0.0], "coincident")
    } else if let Some((lower, upper)) = interval_box(&dom) {
        let k = model_distance(&ModelSpace::IntervalProduct { lower, upper }, w.as_slice(), z.as_slice())?;
        (k, k.tanh(), [0.0, 0.0], "exact_interval_product")
    } else {
        let trace = connect(&dom, w, z)?;
        let k = trace.kobayashi().ok_or_else(|| Failure::Solver("trace carries no distance".into()))?;
        (k, trace.s().unwrap_or(k.tanh()), trace.residuals, "solver")
    };
    let lower = affine_lower_bound(&dom, w, z, 64)?;
    let upper = lempert_upper_bound(&dom, w, z, cfg.degree)?.value;
    let lower_ok = lower <= k + LOWER_SLACK;
    let upper_ok = k <= upper + UPPER_SLACK;
    let residual_ok = residuals[0].max(residuals[1]) <= cfg.tol;
    let tol = json!({"residual": cfg.tol, "lower_slack": LOWER_SLACK, "upper_slack": UPPER_SLACK});
    let text = match cfg.format {
        Format::Json => {
            let mut m = header(cfg, tol);
            m.insert("domain".into(), json!(dom.label()));
            m.insert("method".into(), json!(method));
            m.insert("k".into(), json!(k));
            m.insert("lower_bound".into(), json!(lower));
            m.insert("upper_bound".into(), json!(upper));
            m.insert("s".into(), json!(s));
            m.insert("residuals".into(), json!(residuals));
            m.insert("sandwich".into(), json!({"lower_ok": lower_ok, "upper_ok": upper_ok, "residual_ok": residual_ok}));
            json_text(m)
        }
        Format::Csv => format!(
            "config_hash,seed,domain,method,k,lower_bound,upper_bound,s,residual_w,residual_z,lower_ok,upper_ok,residual_ok\n{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            cfg.hash(),
            cfg.seed,
            dom.label(),
            method,
            num(k),
            num(lower),
            num(upper),
            num(s),
            num(residuals[0]),
            num(residuals[1]),
            lower_ok,
            upper_ok,
            residual_ok
        ),
    };
    emit(cfg, &text)?;
    if lower_ok && upper_ok && residual_ok {
        Ok(())
    } else {
        Err(Failure::Property(format!("sandwich {} <= {} <= {} + {} or residuals {:?} failed", lower, k, upper, UPPER_SLACK, residuals)))
    }
}

pub fn geodesic(cfg: &RunConfig) -> Result<(), Failure> {
    let dom = domain(cfg, "ball2")?;
    let pts = tube_points(cfg, &dom, 2)?;
    let boundary = pts.iter().all(|p| p.is_real() && dom.on_boundary(&p.re()));
    let trace = if boundary {
        connect_boundary(&dom, &pts[0].re(), &pts[1].re())?
    } else {
        inside(&dom, &pts)?;
        connect(&dom, &pts[0], &pts[1])?
    };
    let record = trace.record(&[0.5, 0.9, 0.99], cfg.grid, true)?;
    let tol = json!({"residual": cfg.tol, "real_curve": 1e-7});
    let residual_ok = trace.max_residual() <= cfg.tol;
    let text = match cfg.format {
        Format::Json => {
            let mut m = header(cfg, tol);
            m.insert("domain".into(), json!(dom.label()));
            m.insert("mode".into(), json!(if boundary { "boundary" } else { "interior" }));
            m.insert("residual_ok".into(), json!(residual_ok));
            m.insert("trace".into(), to_value(&record));
            json_text(m)
        }
        Format::Csv => {
            let n = dom.dim();
            let mut s = format!("# config_hash={} seed={} case_label={}\nlambda_re,lambda_im", cfg.hash(), cfg.seed, record.case_label);
            for i in 1..=n {
                s.push_str(&format!(",f{i}_re,f{i}_im"));
            }
            s.push('\n');
            for g in &record.grid {
                s.push_str(&format!("{},{}", num(g.lambda.0), num(g.lambda.1)));
                for c in &g.f {
                    s.push_str(&format!(",{},{}", num(c.0), num(c.1)));
                }
                s.push('\n');
            }
            s
        }
    };
    emit(cfg, &text)?;
    if residual_ok {
        Ok(())
    } else {
        Err(Failure::Solver(format!("endpoint residual {:.3e} above {:.1e}", trace.max_residual(), cfg.tol)))
    }
}

pub fn gromov_scan(cfg: &RunConfig) -> Result<(), Failure> {
    let name = cfg.domain.as_deref().unwrap_or("square");
    let space = if name == "polydisc" {
        WitnessSpace::Polydisc
    } else {
        let dom = load_domain(name)?;
        match interval_box(&dom) {
            Some((lower, upper)) => WitnessSpace::IntervalTube { lower, upper },
            None if dom.is_smooth() => WitnessSpace::Smooth(dom),
            None => return Err(Failure::Config("witness search needs a box, the polydisc or a smooth base".into())),
        }
    };
    let opts = WitnessOptions { target: cfg.target, budget: cfg.budget, seed: cfg.seed, degree: cfg.degree, ..Default::default() };
    let rep = witness_search(&space, &opts)?;
    let summary = json!({
        "space": rep.space,
        "strategy": to_value(&rep.strategy),
        "target": rep.target,
        "achieved": rep.achieved,
        "max_s": rep.level,
        "steps": rep.steps.len(),
    });
    let tol = json!({"shrink": opts.shrink});
    let text = match cfg.format {
        Format::Json => {
            let mut m = header(cfg, tol);
            m.insert("summary".into(), summary.clone());
            m.insert("steps".into(), to_value(&rep.steps));
            json_text(m)
        }
        Format::Csv => format!("# config_hash={} seed={} shrink={}\n{}", cfg.hash(), cfg.seed, opts.shrink, rep.to_csv()?),
    };
    emit(cfg, &text)?;
    eprintln!("{}", serde_json::to_string(&crate::report::round(summary)).expect("summary serializes"));
    match cfg.target {
        Some(m) if !rep.achieved => Err(Failure::Budget(format!("reached S = {} below target {} after {} steps", rep.level, m, rep.steps.len()))),
        _ => Ok(()),
    }
}

struct Check {
    name: String,
    passed: bool,
    tolerance: f64,
    measured: f64,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, tolerance: f64, measured: f64) -> Self {
        Check { name: name.into(), passed, tolerance, measured }
    }

    fn to_json(&self) -> Value {
        json!({"name": self.name, "passed": self.passed, "tolerance": self.tolerance, "measured": self.measured})
    }
}

pub fn verify(cfg: &RunConfig) -> Result<(), Failure> {
    let bases: Vec<BaseDomain> = match &cfg.domain {
        Some(d) => vec![load_domain(d)?],
        None => vec![load_domain("ball2")?, load_domain("ellipsoid2")?],
    };
    if let Some(b) = bases.iter().find(|b| !b.is_smooth()) {
        return Err(Failure::Config(format!("verify needs a smooth base, got {}", b.label())));
    }
    let mut checks = Vec::new();

    let worst = [0.5, 0.9, 0.99]
        .iter()
        .map(|&r: &f64| Ok((polydisc_witness(r)?.s() - ((1.0 + r) / (1.0 - r)).ln()).abs()))
        .collect::<tubegeo::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check::new("polydisc_witness", worst <= 1e-12, 1e-12, worst));

    let ball = BaseDomain::unit_ball(2);
    let k = kobayashi_distance(&ball, &TubePoint::real(&[0.0, 0.0]), &TubePoint::real(&[0.5, 0.0]))?;
    let err = (k - (PI / 8.0).tan().atanh()).abs();
    checks.push(Check::new("strip_slice", err <= 1e-5, 1e-5, err));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for dom in &bases {
        let opts = HilbertCheckOptions { pairs: cfg.grid, seed: cfg.seed, swapped: cfg.inject_hilbert_sign_bug, ..Default::default() };
        let rep = check_hilbert_inequality_with(dom, &opts)?;
        checks.push(Check::new(format!("hilbert_inequality/{}", dom.label()), rep.passed(), rep.tolerance, rep.min_slack));

        let n = dom.dim();
        let point = |rng: &mut ChaCha8Rng| {
            let re = dom.sample_interior(rng, 0.9);
            let im: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            TubePoint::from_parts(&re, &rvec(&im))
        };
        let (w, z) = (point(&mut rng), point(&mut rng));
        let rep = uniqueness_probe(dom, &w, &z, 8)?;
        checks.push(Check::new(format!("uniqueness/{}", dom.label()), rep.unique(1e-5), 1e-5, rep.max_profile_deviation));
    }

    let siegel = siegel_check_with(&SiegelOptions { seed: cfg.seed, ..Default::default() })?;
    let worst = siegel.max_symmetry_error.max(siegel.max_triangle_violation).max(siegel.max_translation_error);
    checks.push(Check::new("siegel_model", siegel.passed(), siegel.tolerance, worst));
    let ex2 = example2_check_with(&Example2Options { seed: cfg.seed, ..Default::default() })?;
    checks.push(Check::new("example2_model", ex2.passed(), 1e-12, ex2.max_involution_error));

    let square = WitnessSpace::IntervalTube { lower: vec![0.0, 0.0], upper: vec![1.0, 1.0] };
    let rep = witness_search(&square, &WitnessOptions { target: Some(10.0), ..Default::default() })?;
    checks.push(Check::new("square_corner_witness", rep.achieved, 10.0, rep.level));
    let base = PolytopeBase::interval_product(&[0.0, 0.0], &[1.0, 1.0])?;
    let blow = blowup_convergence_check(&base, &rvec(&[0.0, 0.0]), &BlowupOptions::dyadic(2, 12))?;
    let gap = blow.gap_at(10).unwrap_or(f64::INFINITY);
    checks.push(Check::new("blowup_gap_k10", gap <= 1e-3, 1e-3, gap));
    checks.push(Check::new("blowup_scaling", blow.max_scaling_deviation <= 1e-12, 1e-12, blow.max_scaling_deviation));

    let passed = checks.iter().all(|c| c.passed);
    let tol: serde_json::Map<String, Value> = checks.iter().map(|c| (c.name.clone(), json!(c.tolerance))).collect();
    let text = match cfg.format {
        Format::Json => {
            let mut m = header(cfg, Value::Object(tol));
            m.insert("checks".into(), Value::Array(checks.iter().map(Check::to_json).collect()));
            m.insert("passed".into(), json!(passed));
            json_text(m)
        }
        Format::Csv => {
            let mut s = format!("# config_hash={} seed={}\ncheck,passed,tolerance,measured\n", cfg.hash(), cfg.seed);
            for c in &checks {
                s.push_str(&format!("{},{},{},{}\n", c.name, c.passed, num(c.tolerance), num(c.measured)));
            }
            s
        }
    };
    emit(cfg, &text)?;
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(Failure::Property(failed.join(", ")))
    }
}
