//! Gromov four-point diagnostics, tangent cones of polytope bases and the
//! blow-up comparison near a corner.

mod blowup;
mod cone;
mod witness;

use num_complex::Complex64;
use serde::Serialize;

use crate::base_geometry::BaseDomain;
use crate::error::{Error, Result};
use crate::geodesic_solver::kobayashi_distance;
use crate::metrics::{affine_lower_bound, lempert_upper_bound, model_distance, ModelSpace};
use crate::tube::TubePoint;

pub use blowup::{blowup_convergence_check, BlowupOptions, BlowupReport, BlowupRow};
pub use cone::{corner_cone, ConeModel, ACTIVE_TOL};
pub use witness::{witness_search, WitnessOptions, WitnessReport, WitnessSpace, WitnessStep, WitnessStrategy};

/// Pair order used for the six distances of a quadruple `(x, y, z, w)`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// `S = d(x,z) + d(y,w) − max{d(x,y) + d(z,w), d(y,z) + d(x,w)}` from the six
/// distances in `PAIRS` order.
pub fn s_from_distances(d: &[f64; 6]) -> f64 {
    let [xy, xz, xw, yz, yw, zw] = *d;
    xz + yw - (xy + zw).max(yz + xw)
}

/// Enclosure of `S` from lower and upper bounds on each distance.
pub fn s_interval(lo: &[f64; 6], hi: &[f64; 6]) -> (f64, f64) {
    let low = lo[1] + lo[4] - (hi[0] + hi[5]).max(hi[3] + hi[2]);
    let high = hi[1] + hi[4] - (lo[0] + lo[5]).max(lo[3] + lo[2]);
    (low, high)
}

/// Four-point quantity for any distance function.
pub fn s_four_point<P, F>(mut dist: F, x: &P, y: &P, z: &P, w: &P) -> Result<f64>
where
    F: FnMut(&P, &P) -> Result<f64>,
{
    let pts = [x, y, z, w];
    let mut d = [0.0; 6];
    for (slot, &(i, j)) in d.iter_mut().zip(&PAIRS) {
        *slot = dist(pts[i], pts[j])?;
    }
    Ok(s_from_distances(&d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ExactModel,
    Solver,
    BoundsPair,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadrupleReport {
    /// `x, y, z, w` as lists of `[re, im]`.
    pub points: Vec<Vec<[f64; 2]>>,
    /// `[low, high]` per pair in `PAIRS` order; equal ends for exact values.
    pub distances: Vec<[f64; 2]>,
    pub s_low: f64,
    pub s_high: f64,
    pub provenance: Provenance,
}

impl QuadrupleReport {
    fn new(pts: [&[Complex64]; 4], lo: [f64; 6], hi: [f64; 6], provenance: Provenance) -> Self {
        let (s_low, s_high) = if provenance == Provenance::BoundsPair {
            s_interval(&lo, &hi)
        } else {
            let s = s_from_distances(&lo);
            (s, s)
        };
        QuadrupleReport {
            points: pts.iter().map(|p| p.iter().map(|c| [c.re, c.im]).collect()).collect(),
            distances: lo.iter().zip(&hi).map(|(&l, &h)| [l, h]).collect(),
            s_low,
            s_high,
            provenance,
        }
    }

    /// The value of `S` for point reports, the midpoint otherwise.
    pub fn s(&self) -> f64 {
        0.5 * (self.s_low + self.s_high)
    }

    pub fn is_interval(&self) -> bool {
        self.provenance == Provenance::BoundsPair
    }

    pub fn point(&self, i: usize) -> Vec<Complex64> {
        self.points[i].iter().map(|&[re, im]| Complex64::new(re, im)).collect()
    }
}

fn six<F: FnMut(usize, usize) -> Result<f64>>(mut f: F) -> Result<[f64; 6]> {
    let mut d = [0.0; 6];
    for (slot, &(i, j)) in d.iter_mut().zip(&PAIRS) {
        *slot = f(i, j)?;
    }
    Ok(d)
}

/// `S` with closed-form distances of a model space.
pub fn quadruple_exact(space: &ModelSpace, pts: [&[Complex64]; 4]) -> Result<QuadrupleReport> {
    let d = six(|i, j| model_distance(space, pts[i], pts[j]))?;
    Ok(QuadrupleReport::new(pts, d, d, Provenance::ExactModel))
}

/// `S` with solver distances on a smooth base.
pub fn quadruple_solver(domain: &BaseDomain, pts: [&TubePoint; 4]) -> Result<QuadrupleReport> {
    let d = six(|i, j| kobayashi_distance(domain, pts[i], pts[j]))?;
    Ok(QuadrupleReport::new(slices(&pts), d, d, Provenance::Solver))
}

/// Enclosure of `S` from the affine lower and polynomial-disc upper bounds.
pub fn quadruple_bounds(domain: &BaseDomain, pts: [&TubePoint; 4], degree: usize) -> Result<QuadrupleReport> {
    let lo = six(|i, j| affine_lower_bound(domain, pts[i], pts[j], 64))?;
    let hi = six(|i, j| Ok(lempert_upper_bound(domain, pts[i], pts[j], degree)?.value))?;
    Ok(QuadrupleReport::new(slices(&pts), lo, hi, Provenance::BoundsPair))
}

fn slices<'a>(pts: &[&'a TubePoint; 4]) -> [&'a [Complex64]; 4] {
    [pts[0].as_slice(), pts[1].as_slice(), pts[2].as_slice(), pts[3].as_slice()]
}

/// The bidisc quadruple `(r,0), (0,r), (−r,0), (0,−r)` with `S = 2 atanh r`.
pub fn polydisc_witness(r: f64) -> Result<QuadrupleReport> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Argument("polydisc witness needs 0 < r < 1".into()));
    }
    let c = |x: f64| Complex64::new(x, 0.0);
    let pts = [[c(r), c(0.0)], [c(0.0), c(r)], [c(-r), c(0.0)], [c(0.0), c(-r)]];
    quadruple_exact(&ModelSpace::Polydisc(2), [&pts[0], &pts[1], &pts[2], &pts[3]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_metric_has_zero_defect() {
        // four leaves of a star with unit edges
        assert_eq!(s_from_distances(&[2.0; 6]), 0.0);
    }

    #[test]
    fn interval_contains_point_value() {
        let d = [1.0, 2.5, 1.2, 1.1, 2.4, 0.9];
        let s = s_from_distances(&d);
        let lo = d.map(|v| v - 0.01);
        let hi = d.map(|v| v + 0.01);
        let (a, b) = s_interval(&lo, &hi);
        assert!(a < s && s < b);
        assert!((b - a - 0.08).abs() < 1e-12);
    }

    #[test]
    fn polydisc_witness_value() {
        for r in [0.3, 0.9, 0.999] {
            let q = polydisc_witness(r).unwrap();
            assert!((q.s() - 2.0 * f64::atanh(r)).abs() < 1e-12);
        }
        assert!(polydisc_witness(1.0).is_err());
    }
}
