use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::evaluator::GeodesicMap;
use super::params::{FCaseLabel, GeodesicParams};
use crate::base_geometry::BaseDomain;
use crate::error::Result;
use crate::linalg::{self, RVec};
use crate::quadrature::{extrapolate_log_to_zero, extrapolate_to_zero};

/// Radii used for radial limits at the boundary.
pub const RADII: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

/// Level above which the imaginary part counts as having blown up.
const IMAG_THRESHOLD: f64 = 50.0;

#[derive(Clone, Debug, Serialize)]
pub struct SingularLimit {
    pub angle: f64,
    /// `lim_{t→t_s⁺} g`
    pub x_plus: Vec<f64>,
    /// `lim_{t→t_s⁻} g`
    pub x_minus: Vec<f64>,
    /// `(x₊ + x₋)/2`, the radial limit of the Poisson extension of a jump.
    pub radial_real_midpoint: Vec<f64>,
    /// Richardson extrapolation of `Re f(r e^{it_s})` over [`RADII`].
    pub radial_real_extrapolated: Vec<f64>,
    /// Distance of the extrapolated real limit to the segment `[x₋, x₊]`.
    pub segment_distance: f64,
    /// `⟨Im f(r e^{it_s}) − Im f(0), e⟩` at [`RADII`], `e` the unit jump
    /// direction `x₊ − x₋` of the first singular point.
    pub imag_projection: Vec<f64>,
    pub imag_sign: i8,
    pub monotone: bool,
    /// Least-squares slope of the projection against `log(1/(1−r))`.
    pub growth_rate: f64,
    pub exceeds_threshold: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitReport {
    Continuous {
        label: FCaseLabel,
        samples: usize,
        /// Max boundary residual of the extrapolated radial limits.
        max_boundary_residual: f64,
        /// Max distance between the extrapolated limit and `g(e^{it})`.
        max_gap_to_profile: f64,
    },
    Singular {
        label: FCaseLabel,
        points: Vec<SingularLimit>,
    },
}

impl LimitReport {
    pub fn label(&self) -> FCaseLabel {
        match self {
            LimitReport::Continuous { label, .. } | LimitReport::Singular { label, .. } => *label,
        }
    }
}

fn radial(map: &GeodesicMap, t: f64) -> Result<Vec<num_complex::Complex<f64>>> {
    let lams: Vec<Complex64> = RADII.iter().map(|&r| Complex64::from_polar(r, t)).collect();
    let vals = map.eval_many(&lams)?;
    Ok(vals.into_iter().flat_map(|v| v.into_iter().copied().collect::<Vec<_>>()).collect())
}

pub fn boundary_limits(domain: &BaseDomain, params: &GeodesicParams) -> Result<LimitReport> {
    let map = GeodesicMap::new(domain, params.clone())?;
    let n = params.dim();
    let hs: Vec<f64> = RADII.iter().map(|r| 1.0 - r).collect();
    // kinks of g at singular points add h log h terms
    let extrapolate_with = |flat: &[Complex64], kinked: bool| -> RVec {
        RVec::from_iterator(
            n,
            (0..n).map(|i| {
                let v: Vec<f64> = (0..RADII.len()).map(|k| flat[k * n + i].re).collect();
                if kinked {
                    extrapolate_log_to_zero(&hs, &v)
                } else {
                    extrapolate_to_zero(&hs, &v)
                }
            }),
        )
    };
    let extrapolate = |flat: &[Complex64]| extrapolate_with(flat, false);
    let sing = params.singular_points();
    if sing.is_empty() {
        let samples = 32;
        let mut max_res: f64 = 0.0;
        let mut max_gap: f64 = 0.0;
        for j in 0..samples {
            let t = TAU * (j as f64 + 0.5) / samples as f64;
            let x = extrapolate(&radial(&map, t)?);
            max_res = max_res.max(domain.boundary_residual(&x));
            if let Some(g) = map.boundary_value(t)? {
                max_gap = max_gap.max((x - g).norm());
            }
        }
        return Ok(LimitReport::Continuous {
            label: params.case_label(),
            samples,
            max_boundary_residual: max_res,
            max_gap_to_profile: max_gap,
        });
    }
    let (xp0, xm0) = map.one_sided_limits(sing[0])?;
    let e = linalg::unit(&(&xp0 - &xm0)).unwrap_or_else(|| RVec::zeros(n));
    let m = params.im_f0();
    let logs: Vec<f64> = RADII.iter().map(|r| (1.0 / (1.0 - r)).ln()).collect();
    let mut points = Vec::new();
    for &ts in sing {
        let (xp, xm) = map.one_sided_limits(ts)?;
        let flat = radial(&map, ts)?;
        let real = extrapolate_with(&flat, true);
        let proj: Vec<f64> = (0..RADII.len())
            .map(|k| (0..n).map(|i| (flat[k * n + i].im - m[i]) * e[i]).sum())
            .collect();
        let last = *proj.last().unwrap();
        let sign = if last > 0.0 { 1 } else if last < 0.0 { -1 } else { 0 };
        let monotone = proj.windows(2).all(|w| (w[1] - w[0]) * sign as f64 > 0.0);
        let mean_l = logs.iter().sum::<f64>() / logs.len() as f64;
        let mean_p = proj.iter().sum::<f64>() / proj.len() as f64;
        let slope = logs.iter().zip(&proj).map(|(l, p)| (l - mean_l) * (p - mean_p)).sum::<f64>()
            / logs.iter().map(|l| (l - mean_l).powi(2)).sum::<f64>();
        points.push(SingularLimit {
            angle: ts,
            radial_real_midpoint: ((&xp + &xm) * 0.5).as_slice().to_vec(),
            segment_distance: segment_distance(&real, &xm, &xp),
            radial_real_extrapolated: real.as_slice().to_vec(),
            x_plus: xp.as_slice().to_vec(),
            x_minus: xm.as_slice().to_vec(),
            imag_projection: proj,
            imag_sign: sign,
            monotone,
            growth_rate: slope,
            exceeds_threshold: last.abs() > IMAG_THRESHOLD,
        });
    }
    Ok(LimitReport::Singular {
        label: params.case_label(),
        points,
    })
}

fn segment_distance(x: &RVec, a: &RVec, b: &RVec) -> f64 {
    let d = b - a;
    let dd = d.norm_squared();
    let t = if dd > 0.0 { ((x - a).dot(&d) / dd).clamp(0.0, 1.0) } else { 0.0 };
    (x - (a + d * t)).norm()
}
