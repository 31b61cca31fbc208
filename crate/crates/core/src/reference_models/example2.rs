use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{dump, Counterexample, ModelMap};
use crate::error::Result;

pub(super) fn phi(z: &[Complex64]) -> Vec<Complex64> {
    z.iter().map(|&w| (1.0 - w) / (1.0 + w)).collect()
}

pub(super) fn phi_printed(z: &[Complex64]) -> Vec<Complex64> {
    vec![(1.0 - z[0]) / (1.0 + z[1]), (1.0 - z[1]) / (1.0 + z[1])]
}

/// `(1−|ζ₁|²)(1−|ζ₂|²)` and `|1+ζ₁|²|1+ζ₂|²`.
fn sides(p: &[Complex64]) -> (f64, f64) {
    let lhs = (1.0 - p[0].norm_sqr()) * (1.0 - p[1].norm_sqr());
    let rhs = (1.0 + p[0]).norm_sqr() * (1.0 + p[1]).norm_sqr();
    (lhs, rhs)
}

/// The defining inequality of the image, together with `ζ ∈ 𝔻²`.
pub fn example2_inequality(p: &[Complex64]) -> bool {
    let (lhs, rhs) = sides(p);
    p.iter().all(|c| c.norm() < 1.0) && lhs > rhs
}

/// Largest margin `min(r₁ − |ζ₁ − c₁|, r₂ − |ζ₂ − c₂|)` over the bidiscs
/// indexed by `x ∈ (−1,1)`. The margin is concave in `x`, so a coarse grid
/// followed by golden section finds the maximiser.
///
/// With `printed` the centres `((x+1)/2, (1−x)/2)` are used; otherwise their
/// negatives, the image of `{Re z₁ > s, Re z₂ > 1/s}` under the involution.
pub fn example2_margin(p: &[Complex64], printed: bool) -> f64 {
    let sign = if printed { 1.0 } else { -1.0 };
    let m = |x: f64| {
        let a = 0.5 * (1.0 - x) - (p[0] - sign * 0.5 * (x + 1.0)).norm();
        let b = 0.5 * (1.0 + x) - (p[1] - sign * 0.5 * (1.0 - x)).norm();
        a.min(b)
    };
    let grid = 200;
    let mut best = (0, f64::NEG_INFINITY);
    for j in 1..grid {
        let v = m(-1.0 + 2.0 * j as f64 / grid as f64);
        if v > best.1 {
            best = (j, v);
        }
    }
    let h = 2.0 / grid as f64;
    let centre = -1.0 + h * best.0 as f64;
    let (mut a, mut b) = ((centre - h).max(-1.0), (centre + h).min(1.0));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let (c1, c2) = (b - g * (b - a), a + g * (b - a));
        if m(c1) > m(c2) {
            b = c2;
        } else {
            a = c1;
        }
    }
    best.1.max(m(0.5 * (a + b)))
}

pub fn in_example2_union(p: &[Complex64], printed: bool) -> bool {
    example2_margin(p, printed) > 0.0
}

#[derive(Clone, Debug)]
pub struct Example2Options {
    pub samples: usize,
    pub seed: u64,
    /// Use the printed map instead of the componentwise involution.
    pub printed_map: bool,
    /// Use the printed disc centres for the union.
    pub printed_discs: bool,
}

impl Default for Example2Options {
    fn default() -> Self {
        Example2Options { samples: 1000, seed: 2, printed_map: false, printed_discs: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Example2Report {
    pub samples: usize,
    pub seed: u64,
    pub printed_map: bool,
    pub printed_discs: bool,
    pub max_involution_error: f64,
    pub outside_polydisc: usize,
    pub inequality_failures: usize,
    pub union_failures: usize,
    /// Points of `𝔻²` where the inequality and the union disagree.
    pub equivalence_mismatches: usize,
    pub convexity_failures: usize,
    /// `max |lhs/rhs − 1|` on images of `{x₁x₂ = 1}`.
    pub boundary_max_error: f64,
    pub counterexamples: Vec<Counterexample>,
}

impl Example2Report {
    pub fn passed(&self) -> bool {
        self.max_involution_error <= 1e-12
            && self.outside_polydisc == 0
            && self.inequality_failures == 0
            && self.union_failures == 0
            && self.equivalence_mismatches == 0
            && self.convexity_failures == 0
            && self.boundary_max_error <= 1e-9
    }
}

pub fn example2_check(samples: usize) -> Result<Example2Report> {
    example2_check_with(&Example2Options { samples, ..Default::default() })
}

/// Image checks for `Ω = {x ∈ (0,∞)² : x₁x₂ > 1}`.
pub fn example2_check_with(opts: &Example2Options) -> Result<Example2Report> {
    let map = if opts.printed_map { ModelMap::example2_printed() } else { ModelMap::example2() };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut rep = Example2Report {
        samples: opts.samples,
        seed: opts.seed,
        printed_map: opts.printed_map,
        printed_discs: opts.printed_discs,
        max_involution_error: 0.0,
        outside_polydisc: 0,
        inequality_failures: 0,
        union_failures: 0,
        equivalence_mismatches: 0,
        convexity_failures: 0,
        boundary_max_error: 0.0,
        counterexamples: Vec::new(),
    };
    let draw = |rng: &mut ChaCha8Rng, excess: f64| {
        let x1: f64 = rng.gen_range(-2.0f64..2.0).exp();
        let x2 = excess.exp() / x1;
        vec![Complex64::new(x1, rng.gen_range(-3.0..3.0)), Complex64::new(x2, rng.gen_range(-3.0..3.0))]
    };
    let mut images = Vec::with_capacity(opts.samples);
    for _ in 0..opts.samples {
        let excess = rng.gen_range(1e-3..2.0);
        let z = draw(&mut rng, excess);
        let p = map.forward(&z);
        let back = map.inverse(&p);
        let err = back.iter().zip(&z).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        rep.max_involution_error = rep.max_involution_error.max(err);
        if !p.iter().all(|c| c.norm() < 1.0) {
            rep.outside_polydisc += 1;
            dump(&mut rep.counterexamples, "polydisc", &z);
        }
        if !example2_inequality(&p) {
            rep.inequality_failures += 1;
            dump(&mut rep.counterexamples, "inequality", &z);
        }
        if !in_example2_union(&p, opts.printed_discs) {
            rep.union_failures += 1;
            dump(&mut rep.counterexamples, "bidisc_union", &z);
        }
        let b = map.forward(&draw(&mut rng, 0.0));
        let (lhs, rhs) = sides(&b);
        rep.boundary_max_error = rep.boundary_max_error.max((lhs / rhs - 1.0).abs());
        images.push(p);
    }
    for pair in images.chunks(2).filter(|c| c.len() == 2) {
        let mid: Vec<Complex64> = pair[0].iter().zip(&pair[1]).map(|(a, b)| 0.5 * (a + b)).collect();
        if !example2_inequality(&mid) {
            rep.convexity_failures += 1;
            dump(&mut rep.counterexamples, "convexity", &mid);
        }
    }
    for _ in 0..opts.samples {
        let q: Vec<Complex64> = (0..2)
            .map(|_| Complex64::from_polar(rng.gen_range(0.0f64..1.0).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let (lhs, rhs) = sides(&q);
        let margin = example2_margin(&q, opts.printed_discs);
        if (lhs - rhs).abs() < 1e-9 || margin.abs() < 1e-9 {
            continue;
        }
        if (lhs > rhs) != (margin > 0.0) {
            rep.equivalence_mismatches += 1;
            dump(&mut rep.counterexamples, "equivalence", &q);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_point_two_two() {
        let p = phi(&[Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0)]);
        assert!((p[0].re + 1.0 / 3.0).abs() < 1e-15 && (p[1].re + 1.0 / 3.0).abs() < 1e-15);
        let (lhs, rhs) = sides(&p);
        assert!((lhs - 64.0 / 81.0).abs() < 1e-15);
        assert!((rhs - 16.0 / 81.0).abs() < 1e-15);
        assert!(in_example2_union(&p, false));
        assert!(!in_example2_union(&p, true));
    }

    #[test]
    fn printed_map_is_not_an_involution() {
        let z = [Complex64::new(2.0, 0.5), Complex64::new(0.7, -1.0)];
        let back = phi_printed(&phi_printed(&z));
        assert!((back[0] - z[0]).norm() > 1e-3);
    }
}
