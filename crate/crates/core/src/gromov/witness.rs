use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{quadruple_bounds, quadruple_exact, QuadrupleReport};
use crate::base_geometry::BaseDomain;
use crate::error::{Error, Result};
use crate::metrics::ModelSpace;
use crate::tube::TubePoint;

#[derive(Clone, Debug)]
pub enum WitnessSpace {
    /// The bidisc, with the analytic schedule `r_k = 1 − 2^{−k}`.
    Polydisc,
    /// Tube over a box; quadruples are transported into the corner at `lower`.
    IntervalTube { lower: Vec<f64>, upper: Vec<f64> },
    /// Tube over a smooth base; random quadruples with interval-mode `S`.
    Smooth(BaseDomain),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessStrategy {
    AnalyticSchedule,
    CornerSchedule,
    RandomSearch,
}

#[derive(Clone, Debug)]
pub struct WitnessOptions {
    /// Stop once `S` (the lower end for intervals) reaches this level.
    pub target: Option<f64>,
    /// Schedule steps or random draws.
    pub budget: usize,
    pub seed: u64,
    /// Polynomial-disc degree of the upper bounds on smooth bases.
    pub degree: usize,
    /// Random real parts are drawn from `x₀ + shrink·(Ω − x₀)`.
    pub shrink: f64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { target: None, budget: 32, seed: 5, degree: 2, shrink: 0.98 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessStep {
    pub k: usize,
    /// Schedule parameter: `r_k` for the bidisc, the blow-up factor for boxes,
    /// `None` for random draws.
    pub t: Option<f64>,
    pub quadruple: QuadrupleReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub space: String,
    pub strategy: WitnessStrategy,
    pub target: Option<f64>,
    pub seed: u64,
    pub achieved: bool,
    /// Largest certified `S` (lower end for intervals).
    pub level: f64,
    pub steps: Vec<WitnessStep>,
}

impl WitnessReport {
    /// Rows `k, t_k, S, S_low, S_high` followed by the real and imaginary parts
    /// of `x, y, z, w`.
    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let n = self.steps.first().map_or(0, |s| s.quadruple.points[0].len());
        let mut header: Vec<String> = ["k", "t_k", "s", "s_low", "s_high"].iter().map(|s| s.to_string()).collect();
        for name in ["x", "y", "z", "w"] {
            for i in 1..=n {
                header.push(format!("{}{}_re", name, i));
                header.push(format!("{}{}_im", name, i));
            }
        }
        wtr.write_record(&header).map_err(csv_err)?;
        for s in &self.steps {
            let q = &s.quadruple;
            let mut row = vec![s.k.to_string(), s.t.map_or(String::new(), fmt), fmt(q.s()), fmt(q.s_low), fmt(q.s_high)];
            for p in &q.points {
                for c in p {
                    row.push(fmt(c[0]));
                    row.push(fmt(c[1]));
                }
            }
            wtr.write_record(&row).map_err(csv_err)?;
        }
        let bytes = wtr.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn fmt(x: f64) -> String {
    crate::linalg::fmt_sig12(x)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Searches for quadruples with large four-point defect `S`.
pub fn witness_search(space: &WitnessSpace, opts: &WitnessOptions) -> Result<WitnessReport> {
    if opts.budget == 0 {
        return Err(Error::Argument("witness search needs a positive budget".into()));
    }
    let (label, strategy) = match space {
        WitnessSpace::Polydisc => ("polydisc".to_string(), WitnessStrategy::AnalyticSchedule),
        WitnessSpace::IntervalTube { .. } => ("interval_tube".to_string(), WitnessStrategy::CornerSchedule),
        WitnessSpace::Smooth(d) => (d.label().to_string(), WitnessStrategy::RandomSearch),
    };
    // random candidates are drawn in order from the seed and bounded in parallel
    let mut candidates = match space {
        WitnessSpace::Smooth(d) => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let draws: Vec<[TubePoint; 4]> = (0..opts.budget).map(|_| random_quadruple(d, &mut rng, opts)).collect();
            draws
                .par_iter()
                .map(|q| quadruple_bounds(d, [&q[0], &q[1], &q[2], &q[3]], opts.degree))
                .collect::<Vec<_>>()
                .into_iter()
        }
        _ => Vec::new().into_iter(),
    };
    let mut steps = Vec::new();
    let mut level = f64::NEG_INFINITY;
    let mut achieved = false;
    for k in 1..=opts.budget {
        let (t, q) = match space {
            WitnessSpace::Polydisc => {
                let r = 1.0 - 0.5f64.powi(k as i32);
                (Some(r), super::polydisc_witness(r)?)
            }
            WitnessSpace::IntervalTube { lower, upper } => corner_step(lower, upper, k)?,
            WitnessSpace::Smooth(_) => (None, candidates.next().expect("one candidate per step")?),
        };
        level = level.max(q.s_low);
        steps.push(WitnessStep { k, t, quadruple: q });
        if opts.target.is_some_and(|m| level >= m) {
            achieved = true;
            break;
        }
    }
    Ok(WitnessReport { space: label, strategy, target: opts.target, seed: opts.seed, achieved, level, steps })
}

/// The bidisc witness at `r_k = 1 − 2^{−k}`, moved to the orthant by
/// `ζ ↦ (1+ζ)/(1−ζ)` and shrunk into the corner of the box by `1/t_k` with
/// the largest real part equal to `2^{−k}` of the side.
fn corner_step(lower: &[f64], upper: &[f64], k: usize) -> Result<(Option<f64>, QuadrupleReport)> {
    let n = lower.len();
    if n < 2 || upper.len() != n || lower.iter().zip(upper).any(|(l, u)| !(l < u)) {
        return Err(Error::Argument("corner schedule needs a box of dimension at least 2".into()));
    }
    let r = 1.0 - 0.5f64.powi(k as i32);
    let q = super::polydisc_witness(r)?;
    let h: Vec<Vec<Complex64>> = (0..4)
        .map(|i| q.point(i).iter().map(|&z| (1.0 + z) / (1.0 - z)).collect())
        .collect();
    let m = h.iter().flatten().map(|c| c.re).fold(0.0, f64::max);
    let t = m / 0.5f64.powi(k as i32);
    let pts: Vec<Vec<Complex64>> = h
        .iter()
        .map(|p| {
            (0..n)
                .map(|i| {
                    let w = upper[i] - lower[i];
                    if i < 2 {
                        lower[i] + p[i] * (w / t)
                    } else {
                        Complex64::new(lower[i] + 0.5 * w, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    let space = ModelSpace::IntervalProduct { lower: lower.to_vec(), upper: upper.to_vec() };
    let rep = quadruple_exact(&space, [&pts[0], &pts[1], &pts[2], &pts[3]])?;
    Ok((Some(t), rep))
}

fn random_quadruple(domain: &BaseDomain, rng: &mut ChaCha8Rng, opts: &WitnessOptions) -> [TubePoint; 4] {
    let n = domain.dim();
    std::array::from_fn(|_| {
        let re = domain.sample_interior(rng, opts.shrink);
        let im: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        TubePoint::from_parts(&re, &crate::linalg::rvec(&im))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polydisc_schedule_increases() {
        let rep = witness_search(&WitnessSpace::Polydisc, &WitnessOptions { budget: 10, ..Default::default() }).unwrap();
        let s: Vec<f64> = rep.steps.iter().map(|s| s.quadruple.s()).collect();
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        assert!((s[9] - 2.0 * (1.0 - 2f64.powi(-10)).atanh()).abs() < 1e-12);
        assert!(!rep.achieved);
    }

    #[test]
    fn corner_schedule_tracks_bidisc() {
        let space = WitnessSpace::IntervalTube { lower: vec![0.0, 0.0], upper: vec![1.0, 1.0] };
        let rep = witness_search(&space, &WitnessOptions { budget: 12, ..Default::default() }).unwrap();
        for st in &rep.steps {
            let r = 1.0 - 0.5f64.powi(st.k as i32);
            let s = st.quadruple.s();
            assert!((s - 2.0 * r.atanh()).abs() < 0.25f64.powi(st.k as i32), "k={} S={}", st.k, s);
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rep = witness_search(&WitnessSpace::Polydisc, &WitnessOptions { budget: 3, ..Default::default() }).unwrap();
        let csv = rep.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("k,t_k,s,s_low,s_high,x1_re"));
    }
}
