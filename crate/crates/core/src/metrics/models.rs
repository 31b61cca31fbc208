use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Model spaces with closed-form Kobayashi distance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpace {
    Disc,
    /// Right half-plane `{Re ω > 0}`.
    HalfPlane,
    /// Vertical strip `{lo < Re ζ < hi}`.
    Strip { lo: f64, hi: f64 },
    Polydisc(usize),
    /// `T_{(0,∞)ⁿ}`, a product of right half-planes.
    OrthantTube(usize),
    Ball(usize),
    /// `T_Ω` for `Ω = ∏ (lower_i, upper_i)`.
    IntervalProduct { lower: Vec<f64>, upper: Vec<f64> },
}

impl ModelSpace {
    pub fn dim(&self) -> usize {
        match self {
            ModelSpace::Disc | ModelSpace::HalfPlane | ModelSpace::Strip { .. } => 1,
            ModelSpace::Polydisc(n) | ModelSpace::OrthantTube(n) | ModelSpace::Ball(n) => *n,
            ModelSpace::IntervalProduct { lower, .. } => lower.len(),
        }
    }

    pub fn contains(&self, z: &[Complex64]) -> bool {
        if z.len() != self.dim() {
            return false;
        }
        match self {
            ModelSpace::Disc | ModelSpace::Polydisc(_) => z.iter().all(|c| c.norm() < 1.0),
            ModelSpace::HalfPlane | ModelSpace::OrthantTube(_) => z.iter().all(|c| c.re > 0.0),
            ModelSpace::Strip { lo, hi } => z[0].re > *lo && z[0].re < *hi,
            ModelSpace::Ball(_) => z.iter().map(|c| c.norm_sqr()).sum::<f64>() < 1.0,
            ModelSpace::IntervalProduct { lower, upper } => {
                z.iter().zip(lower.iter().zip(upper)).all(|(c, (l, u))| c.re > *l && c.re < *u)
            }
        }
    }
}

fn outside(what: &str) -> Error {
    Error::Argument(format!("point outside the {}", what))
}

/// Poincaré distance `atanh |(λ−μ)/(1−μ̄λ)|`, evaluated as
/// `asinh(|λ−μ| / √((1−|λ|²)(1−|μ|²)))` to keep relative accuracy.
pub fn poincare(lambda: Complex64, mu: Complex64) -> Result<f64> {
    let (a, b) = (lambda.norm(), mu.norm());
    if !(a < 1.0 && b < 1.0) {
        return Err(outside("unit disc"));
    }
    let den = ((1.0 - a) * (1.0 + a) * (1.0 - b) * (1.0 + b)).sqrt();
    Ok(((lambda - mu).norm() / den).asinh())
}

/// Distance in the right half-plane.
pub fn half_plane_distance(w: Complex64, z: Complex64) -> Result<f64> {
    if !(w.re > 0.0 && z.re > 0.0) {
        return Err(outside("right half-plane"));
    }
    Ok(((w - z).norm() / (2.0 * (w.re * z.re).sqrt())).asinh())
}

/// Distance in the strip `{lo < Re ζ < hi}` through
/// `ζ ↦ exp(iπ(ζ − lo)/L)` onto the upper half-plane, `L = hi − lo`.
pub fn strip_distance(lo: f64, hi: f64, w: Complex64, z: Complex64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::Argument("strip needs lo < hi".into()));
    }
    if !(w.re > lo && w.re < hi && z.re > lo && z.re < hi) {
        return Err(outside("strip"));
    }
    let l = hi - lo;
    let k = std::f64::consts::PI / l;
    let (p1, p2) = (k * (w.re - lo), k * (z.re - lo));
    let dy = 0.5 * k * (w.im - z.im);
    let dx = 0.5 * (p1 - p2);
    let num = (dy.sinh().powi(2) + dx.sin().powi(2)).sqrt();
    Ok((num / (p1.sin() * p2.sin()).sqrt()).asinh())
}

/// Distance in the tube over an interval with optional endpoints: a strip,
/// a half-plane, or an error for the whole line.
pub fn interval_tube_distance(lo: Option<f64>, hi: Option<f64>, w: Complex64, z: Complex64) -> Result<f64> {
    match (lo, hi) {
        (Some(l), Some(h)) => strip_distance(l, h, w, z),
        (Some(l), None) => half_plane_distance(w - l, z - l),
        (None, Some(h)) => half_plane_distance(h - w, h - z),
        (None, None) => Err(Error::Argument("the tube over ℝ is not hyperbolic".into())),
    }
}

/// Ball distance `atanh √(1 − (1−|a|²)(1−|b|²)/|1−⟨a,b⟩|²)`, evaluated as an
/// `asinh` with the Lagrange identity for the numerator.
pub fn ball_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Argument("ball points of different dimension".into()));
    }
    let na: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|c| c.norm_sqr()).sum();
    if !(na < 1.0 && nb < 1.0) {
        return Err(outside("unit ball"));
    }
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let mut wedge = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            wedge += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
        }
    }
    let num = (diff - wedge).max(0.0);
    let den = (1.0 - na) * (1.0 - nb);
    Ok((num / den).sqrt().asinh())
}

/// Exact distance in a model space.
pub fn model_distance(space: &ModelSpace, w: &[Complex64], z: &[Complex64]) -> Result<f64> {
    let n = space.dim();
    if w.len() != n || z.len() != n {
        return Err(Error::Argument(format!("model of dimension {} needs points of that dimension", n)));
    }
    match space {
        ModelSpace::Disc => poincare(w[0], z[0]),
        ModelSpace::HalfPlane => half_plane_distance(w[0], z[0]),
        ModelSpace::Strip { lo, hi } => strip_distance(*lo, *hi, w[0], z[0]),
        ModelSpace::Polydisc(_) => max_over(n, |i| poincare(w[i], z[i])),
        ModelSpace::OrthantTube(_) => max_over(n, |i| half_plane_distance(w[i], z[i])),
        ModelSpace::Ball(_) => ball_distance(w, z),
        ModelSpace::IntervalProduct { lower, upper } => max_over(n, |i| strip_distance(lower[i], upper[i], w[i], z[i])),
    }
}

fn max_over(n: usize, f: impl Fn(usize) -> Result<f64>) -> Result<f64> {
    let mut m: f64 = 0.0;
    for i in 0..n {
        m = m.max(f(i)?);
    }
    Ok(m)
}

/// Cayley map of the right half-plane onto the disc, `ω ↦ (ω−1)/(ω+1)`.
pub fn cayley(w: Complex64) -> Complex64 {
    (w - 1.0) / (w + 1.0)
}

/// Disc automorphism `λ ↦ e^{iθ}(λ − a)/(1 − āλ)`.
pub fn mobius(theta: f64, a: Complex64, lambda: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, theta) * (lambda - a) / (1.0 - a.conj() * lambda)
}
