//! Closed-form biholomorphic models used as oracles: the paraboloid tube as a
//! Siegel domain and the tube over `{x₁x₂ > 1}` as a convex subset of `𝔻²`.

mod example2;
mod siegel;

use num_complex::Complex64;
use serde::Serialize;

pub use example2::{
    example2_check, example2_check_with, example2_inequality, example2_margin, in_example2_union, Example2Options,
    Example2Report,
};
pub use siegel::{paraboloid_affine_lower_bound, siegel_check, siegel_check_with, siegel_distance, SiegelOptions, SiegelReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTag {
    SiegelParaboloid,
    Example2Involution,
    /// `((1−z₁)/(1+z₂), (1−z₂)/(1+z₂))`, kept as a negative control.
    Example2Printed,
    CayleyComponentwise,
}

type MapFn = fn(&[Complex64]) -> Vec<Complex64>;

/// A holomorphic map of `ℂ²` with its inverse.
#[derive(Clone, Copy, Debug)]
pub struct ModelMap {
    pub tag: ModelTag,
    forward: MapFn,
    inverse: MapFn,
}

impl ModelMap {
    /// `z ↦ (z₁ − z₂²/2, z₂/√2)` from `T_{x₁ > x₂²}` onto `{Re w₁ > |w₂|²}`.
    pub fn siegel() -> Self {
        ModelMap { tag: ModelTag::SiegelParaboloid, forward: siegel::forward, inverse: siegel::inverse }
    }

    /// Componentwise `z ↦ (1−z)/(1+z)`, its own inverse.
    pub fn example2() -> Self {
        ModelMap { tag: ModelTag::Example2Involution, forward: example2::phi, inverse: example2::phi }
    }

    /// The printed formula; treated as its own inverse, which it is not.
    pub fn example2_printed() -> Self {
        ModelMap { tag: ModelTag::Example2Printed, forward: example2::phi_printed, inverse: example2::phi_printed }
    }

    /// Componentwise `ω ↦ (ω−1)/(ω+1)` from the orthant tube onto the polydisc.
    pub fn cayley_componentwise() -> Self {
        ModelMap { tag: ModelTag::CayleyComponentwise, forward: cayley_each, inverse: cayley_each_inverse }
    }

    pub fn forward(&self, z: &[Complex64]) -> Vec<Complex64> {
        (self.forward)(z)
    }

    pub fn inverse(&self, w: &[Complex64]) -> Vec<Complex64> {
        (self.inverse)(w)
    }

    /// `max |F(F⁻¹(p)) − p|` over the points.
    pub fn roundtrip_error(&self, points: &[Vec<Complex64>]) -> f64 {
        points
            .iter()
            .map(|p| {
                let q = self.forward(&self.inverse(p));
                q.iter().zip(p).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

fn cayley_each(z: &[Complex64]) -> Vec<Complex64> {
    z.iter().map(|&w| (w - 1.0) / (w + 1.0)).collect()
}

fn cayley_each_inverse(z: &[Complex64]) -> Vec<Complex64> {
    z.iter().map(|&l| (1.0 + l) / (1.0 - l)).collect()
}

/// A failing sample kept in a report.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub point: Vec<[f64; 2]>,
}

pub(crate) const MAX_DUMPS: usize = 10;

pub(crate) fn dump(list: &mut Vec<Counterexample>, check: &str, p: &[Complex64]) {
    if list.len() < MAX_DUMPS {
        list.push(Counterexample { check: check.to_string(), point: p.iter().map(|c| [c.re, c.im]).collect() });
    }
}
