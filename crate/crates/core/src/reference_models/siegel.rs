use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{dump, Counterexample, ModelMap};
use crate::error::{Error, Result};
use crate::metrics::{ball_distance, half_plane_distance};

pub(super) fn forward(z: &[Complex64]) -> Vec<Complex64> {
    vec![z[0] - 0.5 * z[1] * z[1], z[1] / 2f64.sqrt()]
}

pub(super) fn inverse(w: &[Complex64]) -> Vec<Complex64> {
    vec![w[0] + w[1] * w[1], w[1] * 2f64.sqrt()]
}

/// `{Re w₁ > |w₂|²}` onto the unit ball.
fn to_ball(w: &[Complex64]) -> Vec<Complex64> {
    let d = w[0] + 1.0;
    vec![(w[0] - 1.0) / d, 2.0 * w[1] / d]
}

fn in_paraboloid_tube(z: &[Complex64]) -> bool {
    z.len() == 2 && z[0].re > z[1].re * z[1].re
}

/// Kobayashi distance of `T_{x₁ > x₂²}` pulled back from the ball.
pub fn siegel_distance(z: &[Complex64], w: &[Complex64]) -> Result<f64> {
    if !in_paraboloid_tube(z) || !in_paraboloid_tube(w) {
        return Err(Error::Argument("point outside base".into()));
    }
    ball_distance(&to_ball(&forward(z)), &to_ball(&forward(w)))
}

/// Supremum over the supporting functionals `x₁ − 2c x₂ + c²` of the
/// half-plane distance of the images; a grid in `c` refined by golden section.
pub fn paraboloid_affine_lower_bound(z: &[Complex64], w: &[Complex64]) -> Result<f64> {
    if !in_paraboloid_tube(z) || !in_paraboloid_tube(w) {
        return Err(Error::Argument("point outside base".into()));
    }
    let f = |c: f64| {
        let l = |p: &[Complex64]| p[0] - 2.0 * c * p[1] + c * c;
        half_plane_distance(l(z), l(w)).unwrap_or(0.0)
    };
    let (mut best_c, mut best) = (0.0, f(0.0));
    let steps = 4000;
    for j in 0..=steps {
        let c = -20.0 + 40.0 * j as f64 / steps as f64;
        let v = f(c);
        if v > best {
            best = v;
            best_c = c;
        }
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (best_c - 0.01, best_c + 0.01);
    for _ in 0..60 {
        let (c1, c2) = (b - g * (b - a), a + g * (b - a));
        if f(c1) > f(c2) {
            b = c2;
        } else {
            a = c1;
        }
    }
    Ok(best.max(f(0.5 * (a + b))))
}

#[derive(Clone, Debug)]
pub struct SiegelOptions {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for SiegelOptions {
    fn default() -> Self {
        SiegelOptions { samples: 100, seed: 3, tolerance: 1e-10 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SiegelReport {
    pub samples: usize,
    pub seed: u64,
    pub skipped: usize,
    pub tolerance: f64,
    pub outside_model: usize,
    pub max_roundtrip: f64,
    pub max_symmetry_error: f64,
    pub max_triangle_violation: f64,
    pub max_translation_error: f64,
    /// `max(lower − d)` against the supporting half-plane bound.
    pub max_affine_violation: f64,
    /// Deviation from the half-plane distance on the slice `z₂ = 0`.
    pub slice_error: f64,
    pub counterexamples: Vec<Counterexample>,
}

impl SiegelReport {
    pub fn passed(&self) -> bool {
        self.outside_model == 0
            && self.max_roundtrip <= 1e-12
            && self.max_symmetry_error <= self.tolerance
            && self.max_triangle_violation <= self.tolerance
            && self.max_translation_error <= self.tolerance
            && self.max_affine_violation <= 1e-9
            && self.slice_error <= self.tolerance
    }
}

pub fn siegel_check(samples: usize) -> Result<SiegelReport> {
    siegel_check_with(&SiegelOptions { samples, ..Default::default() })
}

/// Samples `samples` triples in the paraboloid tube and checks the pulled-back
/// distance: model membership, round trip, metric axioms, imaginary
/// translations, the affine lower bound and the `z₂ = 0` slice.
pub fn siegel_check_with(opts: &SiegelOptions) -> Result<SiegelReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let map = ModelMap::siegel();
    let mut rep = SiegelReport {
        samples: opts.samples,
        seed: opts.seed,
        skipped: 0,
        tolerance: opts.tolerance,
        outside_model: 0,
        max_roundtrip: 0.0,
        max_symmetry_error: 0.0,
        max_triangle_violation: 0.0,
        max_translation_error: 0.0,
        max_affine_violation: f64::NEG_INFINITY,
        slice_error: 0.0,
        counterexamples: Vec::new(),
    };
    let draw = |rng: &mut ChaCha8Rng| {
        let x2: f64 = rng.gen_range(-1.0..1.0);
        let x1 = x2 * x2 + rng.gen_range(0.05..2.0);
        vec![Complex64::new(x1, rng.gen_range(-1.0..1.0)), Complex64::new(x2, rng.gen_range(-1.0..1.0))]
    };
    for _ in 0..opts.samples {
        let t: Vec<Vec<Complex64>> = (0..3).map(|_| draw(&mut rng)).collect();
        if !t.iter().all(|p| in_paraboloid_tube(p)) {
            rep.skipped += 1;
            continue;
        }
        for p in &t {
            let w = map.forward(p);
            if !(w[0].re > w[1].norm_sqr()) {
                rep.outside_model += 1;
                dump(&mut rep.counterexamples, "model_membership", p);
            }
        }
        let rt = map.roundtrip_error(&t);
        rep.max_roundtrip = rep.max_roundtrip.max(rt);
        let (x, y, z) = (&t[0], &t[1], &t[2]);
        let (dxy, dyz, dxz) = (siegel_distance(x, y)?, siegel_distance(y, z)?, siegel_distance(x, z)?);
        let sym = (dxy - siegel_distance(y, x)?).abs().max(siegel_distance(x, x)?);
        rep.max_symmetry_error = rep.max_symmetry_error.max(sym);
        let tri = (dxz - dxy - dyz).max(dxy - dxz - dyz).max(dyz - dxy - dxz);
        if tri > opts.tolerance {
            dump(&mut rep.counterexamples, "triangle", x);
        }
        rep.max_triangle_violation = rep.max_triangle_violation.max(tri);
        let m = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let shift = |p: &[Complex64]| vec![p[0] + Complex64::new(0.0, m[0]), p[1] + Complex64::new(0.0, m[1])];
        let tr = (siegel_distance(&shift(x), &shift(y))? - dxy).abs();
        rep.max_translation_error = rep.max_translation_error.max(tr);
        let lower = paraboloid_affine_lower_bound(x, y)?;
        if lower - dxy > 1e-9 {
            dump(&mut rep.counterexamples, "affine_lower", x);
        }
        rep.max_affine_violation = rep.max_affine_violation.max(lower - dxy);
        let (a, b) = (Complex64::new(x[0].re, x[0].im), Complex64::new(z[0].re, z[0].im));
        let zero = Complex64::new(0.0, 0.0);
        let slice = (siegel_distance(&[a, zero], &[b, zero])? - half_plane_distance(a, b)?).abs();
        rep.slice_error = rep.slice_error.max(slice);
    }
    Ok(rep)
}
