use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cone::{corner_cone, ConeModel};
use super::s_four_point;
use crate::base_geometry::PolytopeBase;
use crate::error::{Error, Result};
use crate::linalg::RVec;
use crate::metrics::{model_distance, ModelSpace};
use crate::tube::TubePoint;

#[derive(Clone, Debug)]
pub struct BlowupOptions {
    /// Scale factors `t_k`.
    pub schedule: Vec<f64>,
    /// Compact box `K` of real parts, relative to the corner.
    pub k_lower: Vec<f64>,
    pub k_upper: Vec<f64>,
    /// Probe pairs with real parts in `K`; drawn from `seed` when empty.
    pub probes: Vec<(TubePoint, TubePoint)>,
    pub probe_count: usize,
    /// Random quadruples for the scaling identity.
    pub scaling_samples: usize,
    pub seed: u64,
}

impl BlowupOptions {
    /// `t_k = 2^k` for `k = 1..=k_max` and the box `K = [1,2]ⁿ`.
    pub fn dyadic(n: usize, k_max: u32) -> Self {
        BlowupOptions {
            schedule: (1..=k_max).map(|k| 2f64.powi(k as i32)).collect(),
            k_lower: vec![1.0; n],
            k_upper: vec![2.0; n],
            probes: Vec::new(),
            probe_count: 8,
            scaling_samples: 8,
            seed: 11,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupRow {
    pub k: usize,
    pub t: f64,
    /// `K ⊂ t(Ω − x) ⊂ C`.
    pub contained: bool,
    /// `max |k_{T_{tD}} − k_{T_C}|` over the probes, when contained.
    pub gap: Option<f64>,
    /// `max |S_{tD}(t q) − S_D(q)|` over the sampled quadruples.
    pub scaling_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupReport {
    pub cone: ConeModel,
    pub seed: u64,
    pub rows: Vec<BlowupRow>,
    /// First index with containment; containment persists once reached for a
    /// nested schedule.
    pub k0: Option<usize>,
    pub gaps_nonincreasing: bool,
    pub max_scaling_deviation: f64,
}

impl BlowupReport {
    pub fn gap_at(&self, k: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.k == k).and_then(|r| r.gap)
    }
}

/// Compares the tube over the rescaled box `t_k(Ω − x)` with the tube over the
/// tangent cone at the corner `x`, with exact interval-product distances.
pub fn blowup_convergence_check(base: &PolytopeBase, x: &RVec, opts: &BlowupOptions) -> Result<BlowupReport> {
    let cone = corner_cone(base, x)?;
    let (lower, upper) = base
        .as_interval_product()
        .ok_or_else(|| Error::Unsupported("blow-up check needs an interval-product base".into()))?;
    let n = base.dim();
    if opts.k_lower.len() != n || opts.k_upper.len() != n {
        return Err(Error::Argument("box K has the wrong dimension".into()));
    }
    if opts.k_lower.iter().zip(&opts.k_upper).any(|(a, b)| !(a < b)) {
        return Err(Error::Argument("box K needs lower < upper".into()));
    }
    // relative box D = Ω − x and the cone at the origin
    let dl: Vec<f64> = lower.iter().zip(x.iter()).map(|(l, c)| l - c).collect();
    let du: Vec<f64> = upper.iter().zip(x.iter()).map(|(u, c)| u - c).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let probes = if opts.probes.is_empty() {
        (0..opts.probe_count)
            .map(|_| (sample(&mut rng, &opts.k_lower, &opts.k_upper), sample(&mut rng, &opts.k_lower, &opts.k_upper)))
            .collect()
    } else {
        opts.probes.clone()
    };
    let shift = |p: &TubePoint| TubePoint::from_parts(&(p.re() + x), &p.im());
    let quads: Vec<[TubePoint; 4]> = (0..opts.scaling_samples)
        .map(|_| std::array::from_fn(|_| sample(&mut rng, &dl, &du)))
        .collect();
    let box_space = |t: f64| ModelSpace::IntervalProduct {
        lower: dl.iter().map(|v| t * v).collect(),
        upper: du.iter().map(|v| t * v).collect(),
    };
    let d0 = box_space(1.0);
    let mut rows = Vec::new();
    for (k, &t) in opts.schedule.iter().enumerate() {
        let space = box_space(t);
        let ModelSpace::IntervalProduct { lower: tl, upper: tu } = &space else { unreachable!() };
        let k_inside = (0..n).all(|i| tl[i] < opts.k_lower[i] && opts.k_upper[i] < tu[i]);
        let in_cone = corners(tl, tu).iter().all(|v| cone.contains_closure(&(v + x), 1e-12 * t));
        let contained = k_inside && in_cone;
        let gap = if contained {
            let mut g: f64 = 0.0;
            for (p, q) in &probes {
                let a = model_distance(&space, p.as_slice(), q.as_slice())?;
                let b = cone.distance(&shift(p), &shift(q))?;
                g = g.max((a - b).abs());
            }
            Some(g)
        } else {
            None
        };
        let mut dev: f64 = 0.0;
        for q in &quads {
            let s0 = s_four_point(|a: &TubePoint, b| model_distance(&d0, a.as_slice(), b.as_slice()), &q[0], &q[1], &q[2], &q[3])?;
            let sc: Vec<TubePoint> = q.iter().map(|p| p.scale(t)).collect();
            let st = s_four_point(|a: &TubePoint, b| model_distance(&space, a.as_slice(), b.as_slice()), &sc[0], &sc[1], &sc[2], &sc[3])?;
            dev = dev.max((st - s0).abs());
        }
        rows.push(BlowupRow { k: k + 1, t, contained, gap, scaling_deviation: dev });
    }
    let k0 = rows.iter().find(|r| r.contained).map(|r| r.k);
    let gaps: Vec<f64> = rows.iter().filter_map(|r| r.gap).collect();
    let gaps_nonincreasing = gaps.windows(2).all(|w| w[1] <= w[0] + 1e-15);
    let max_scaling_deviation = rows.iter().map(|r| r.scaling_deviation).fold(0.0, f64::max);
    Ok(BlowupReport { cone, seed: opts.seed, rows, k0, gaps_nonincreasing, max_scaling_deviation })
}

fn sample(rng: &mut ChaCha8Rng, lo: &[f64], hi: &[f64]) -> TubePoint {
    let pts: Vec<Complex64> = lo
        .iter()
        .zip(hi)
        .map(|(l, h)| Complex64::new(l + (h - l) * rng.gen_range(0.05..0.95), rng.gen_range(-1.0..1.0)))
        .collect();
    TubePoint::from_complex(pts)
}

fn corners(lo: &[f64], hi: &[f64]) -> Vec<RVec> {
    let n = lo.len();
    (0..1usize << n)
        .map(|m| RVec::from_iterator(n, (0..n).map(|i| if m >> i & 1 == 1 { hi[i] } else { lo[i] })))
        .collect()
}
