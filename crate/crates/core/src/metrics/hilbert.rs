use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::base_geometry::BaseDomain;
use crate::error::{Error, Result};
use crate::geodesic_solver::kobayashi_distance;
use crate::linalg::{sig12, RVec};
use crate::tube::TubePoint;

/// Chord data for `x ≠ y`: `(‖x−α‖, ‖x−β‖, ‖y−α‖, ‖y−β‖)` with `α` the boundary
/// hit on the side of `x` and `β` on the side of `y`.
fn chord(domain: &BaseDomain, x: &RVec, y: &RVec) -> Result<Option<(f64, f64, f64, f64)>> {
    if !domain.contains(x) || !domain.contains(y) {
        return Err(Error::Argument("Hilbert distance needs interior points".into()));
    }
    let d = y - x;
    let l = d.norm();
    if l == 0.0 {
        return Ok(None);
    }
    let u = d / l;
    let tb = domain.boundary_intersection(x, &u)?;
    let ta = domain.boundary_intersection(x, &(-&u))?;
    Ok(Some((ta, tb, ta + l, tb - l)))
}

/// Hilbert distance `log((‖x−β‖‖y−α‖)/(‖x−α‖‖y−β‖)) ≥ 0`.
pub fn hilbert_distance(domain: &BaseDomain, x: &RVec, y: &RVec) -> Result<f64> {
    match chord(domain, x, y)? {
        None => Ok(0.0),
        Some((xa, xb, _, _)) => {
            let l = (y - x).norm();
            // log(1 + L/‖x−α‖) − log(1 − L/‖x−β‖)
            Ok((l / xa).ln_1p() - (-l / xb).ln_1p())
        }
    }
}

/// The quotient with `α` and `β` in the opposite roles,
/// `log((‖x−α‖‖y−β‖)/(‖x−β‖‖y−α‖))`; equals `−hilbert_distance`.
pub fn hilbert_distance_swapped(domain: &BaseDomain, x: &RVec, y: &RVec) -> Result<f64> {
    match chord(domain, x, y)? {
        None => Ok(0.0),
        Some((xa, xb, ya, yb)) => Ok((xa * yb / (xb * ya)).ln()),
    }
}

#[derive(Clone, Debug)]
pub struct HilbertCheckOptions {
    pub pairs: usize,
    pub seed: u64,
    /// Samples are drawn from `x₀ + shrink·(Ω − x₀)`.
    pub shrink: f64,
    pub tolerance: f64,
    /// Use `hilbert_distance_swapped` instead; a negative control.
    pub swapped: bool,
}

impl Default for HilbertCheckOptions {
    fn default() -> Self {
        HilbertCheckOptions { pairs: 100, seed: 4, shrink: 0.95, tolerance: 1e-5, swapped: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertRow {
    pub pair: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub h: f64,
    pub two_k: f64,
    pub slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertReport {
    pub domain: String,
    pub seed: u64,
    pub swapped: bool,
    pub tolerance: f64,
    pub rows: Vec<HilbertRow>,
    pub min_slack: f64,
    pub violations: usize,
}

impl HilbertReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// `pair,h,two_k,slack` lines.
    pub fn to_csv(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Line {
            pair: usize,
            h: f64,
            two_k: f64,
            slack: f64,
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(Line { pair: r.pair, h: sig12(r.h), two_k: sig12(r.two_k), slack: sig12(r.slack) })
                .map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `h_Ω(x, y) ≥ 2 k_{T_Ω}(x, y)` on random real pairs; reports the slack
/// `h − 2k` of every pair.
pub fn check_hilbert_inequality(domain: &BaseDomain, pairs: usize) -> Result<HilbertReport> {
    check_hilbert_inequality_with(domain, &HilbertCheckOptions { pairs, ..Default::default() })
}

pub fn check_hilbert_inequality_with(domain: &BaseDomain, opts: &HilbertCheckOptions) -> Result<HilbertReport> {
    if !domain.is_smooth() {
        return Err(Error::Unsupported("the Hilbert check needs a smooth strictly convex base".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let samples: Vec<(RVec, RVec)> =
        (0..opts.pairs).map(|_| (domain.sample_interior(&mut rng, opts.shrink), domain.sample_interior(&mut rng, opts.shrink))).collect();
    let rows = samples
        .par_iter()
        .enumerate()
        .map(|(pair, (x, y))| {
            let h = if opts.swapped { hilbert_distance_swapped(domain, x, y)? } else { hilbert_distance(domain, x, y)? };
            let k = kobayashi_distance(domain, &TubePoint::real(x.as_slice()), &TubePoint::real(y.as_slice()))?;
            Ok(HilbertRow { pair, x: x.as_slice().to_vec(), y: y.as_slice().to_vec(), h, two_k: 2.0 * k, slack: h - 2.0 * k })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    let violations = rows.iter().filter(|r| r.slack < -opts.tolerance).count();
    Ok(HilbertReport {
        domain: domain.label().to_string(),
        seed: opts.seed,
        swapped: opts.swapped,
        tolerance: opts.tolerance,
        rows,
        min_slack,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rvec;
    use crate::metrics::models::poincare;
    use num_complex::Complex64;

    #[test]
    fn ball_radius() {
        let b = BaseDomain::unit_ball(2);
        let o = rvec(&[0.0, 0.0]);
        assert_eq!(hilbert_distance(&b, &o, &o).unwrap(), 0.0);
        for t in [0.1, 0.5, 0.9] {
            let h = hilbert_distance(&b, &o, &rvec(&[t, 0.0])).unwrap();
            assert!((h - ((1.0 + t) / (1.0 - t)).ln()).abs() < 1e-14);
            let s = hilbert_distance_swapped(&b, &o, &rvec(&[t, 0.0])).unwrap();
            assert!((s + h).abs() < 1e-14);
        }
    }

    #[test]
    fn collinear_identity_on_interval() {
        // α = −e, β = e, x = s e, y = t e: h = 2 p(s, t)
        let b = BaseDomain::interval_product(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        for (s, t) in [(0.1, 0.7), (-0.6, 0.3), (0.2, -0.9)] {
            let h = hilbert_distance(&b, &rvec(&[s, 0.0]), &rvec(&[t, 0.0])).unwrap();
            let p = poincare(Complex64::new(s, 0.0), Complex64::new(t, 0.0)).unwrap();
            assert!((h - 2.0 * p).abs() < 1e-12);
        }
    }
}
