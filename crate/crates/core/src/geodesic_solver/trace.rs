use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::base_geometry::BaseDomain;
use crate::error::Result;
use crate::geodesic_family::{
    boundary_limits, BoundaryProfile, DiscMap, FCaseLabel, GeodesicMap, GeodesicParams, LimitReport, RADII,
};
use crate::linalg::{CVec, RVec};
use crate::quadrature::extrapolate_to_zero;
use crate::tube::TubePoint;

/// Profile grid stored with every trace.
pub const PROFILE_GRID: usize = 1024;

/// What the trace was asked to connect.
#[derive(Clone, Debug, PartialEq)]
pub enum Anchors {
    /// `f(0) = w`, `f(s) = z`; `distance = atanh s` is kept separately
    /// because `s` rounds to 1 long before the distance loses precision.
    Interior { w: TubePoint, z: TubePoint, s: f64, distance: f64 },
    /// `Re f(−1) = x`, `Re f(1) = y`.
    Boundary { x: RVec, y: RVec },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    /// `a` real, imaginary parts of the endpoints equal.
    Real,
    Complex,
    /// Parameters written down in closed form (boundary pairs).
    Explicit,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveStats {
    pub mode: SolveMode,
    pub starts: usize,
    pub iterations: usize,
    pub best_residual: f64,
}

/// A solved (or explicitly constructed) complex geodesic.
#[derive(Clone, Debug)]
pub struct GeodesicTrace {
    pub params: GeodesicParams,
    pub anchors: Anchors,
    /// Endpoint residuals (first anchor, second anchor), max-norm.
    pub residuals: [f64; 2],
    pub map: GeodesicMap,
    pub profile: BoundaryProfile,
    pub stats: SolveStats,
}

impl GeodesicTrace {
    /// Builds the trace of `params` and measures the anchor residuals.
    pub fn from_params(domain: &BaseDomain, params: GeodesicParams, anchors: Anchors, stats: SolveStats) -> Result<Self> {
        Self::from_map(GeodesicMap::new(domain, params)?, anchors, stats)
    }

    pub fn from_map(map: GeodesicMap, anchors: Anchors, stats: SolveStats) -> Result<Self> {
        let params = map.params().clone();
        let profile = BoundaryProfile::from_geodesic(&map, PROFILE_GRID)?;
        let residuals = match &anchors {
            Anchors::Interior { w, z, s, .. } => {
                let v = map.eval_many(&[Complex64::new(0.0, 0.0), Complex64::new(*s, 0.0)])?;
                [max_abs(&(&v[0] - &w.0)), max_abs(&(&v[1] - &z.0))]
            }
            Anchors::Boundary { x, y } => {
                let xm = radial_real_limit(&map, PI)?;
                let yp = radial_real_limit(&map, 0.0)?;
                [(xm - x).amax(), (yp - y).amax()]
            }
        };
        Ok(GeodesicTrace { params, anchors, residuals, map, profile, stats })
    }

    pub fn s(&self) -> Option<f64> {
        match self.anchors {
            Anchors::Interior { s, .. } => Some(s),
            Anchors::Boundary { .. } => None,
        }
    }

    /// `p(0, s) = atanh s`.
    pub fn kobayashi(&self) -> Option<f64> {
        match self.anchors {
            Anchors::Interior { distance, .. } => Some(distance),
            Anchors::Boundary { .. } => None,
        }
    }

    pub fn case_label(&self) -> FCaseLabel {
        self.params.case_label()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals[0].max(self.residuals[1])
    }

    pub fn limits(&self) -> Result<LimitReport> {
        boundary_limits(self.map.domain(), &self.params)
    }

    /// Largest `‖Im f(r) − Im f(0)‖` over real `r ∈ (−1, 1)` samples.
    pub fn max_imag_on_diameter(&self, samples: &[f64]) -> Result<f64> {
        let m = self.params.im_f0();
        let mut worst: f64 = 0.0;
        for &r in samples {
            let v = self.map.eval(Complex64::new(r, 0.0))?;
            for i in 0..v.len() {
                worst = worst.max((v[i].im - m[i]).abs());
            }
        }
        Ok(worst)
    }

    /// Serializable summary with `f` sampled on a polar grid.
    pub fn record(&self, radii: &[f64], angles: usize, with_limits: bool) -> Result<TraceRecord> {
        let a = self.params.a();
        let mut values = Vec::new();
        for &r in radii {
            let lams: Vec<Complex64> = (0..angles).map(|j| Complex64::from_polar(r, TAU * j as f64 / angles as f64)).collect();
            for (lam, v) in lams.iter().zip(self.map.eval_many(&lams)?) {
                values.push(GridValue {
                    lambda: (lam.re, lam.im),
                    f: v.iter().map(|c| (c.re, c.im)).collect(),
                });
            }
        }
        let diam: Vec<f64> = (1..=9).map(|k| -0.9 + 0.2 * (k as f64 - 1.0) + 0.1).collect();
        let real_curve = self.max_imag_on_diameter(&diam)? <= 1e-7;
        Ok(TraceRecord {
            re_a: a.iter().map(|c| c.re).collect(),
            im_a: a.iter().map(|c| c.im).collect(),
            b: self.params.b().as_slice().to_vec(),
            im_f0: self.params.im_f0().as_slice().to_vec(),
            s: self.s(),
            kobayashi: self.kobayashi(),
            residuals: self.residuals,
            case_label: self.case_label(),
            singular_points: self.params.singular_points().to_vec(),
            real_curve,
            stats: self.stats.clone(),
            grid: values,
            limits: if with_limits { Some(self.limits()?) } else { None },
        })
    }
}

impl DiscMap for GeodesicTrace {
    fn dim(&self) -> usize {
        self.params.dim()
    }

    fn eval(&self, lambda: Complex64) -> Result<CVec> {
        self.map.eval(lambda)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridValue {
    pub lambda: (f64, f64),
    pub f: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRecord {
    pub re_a: Vec<f64>,
    pub im_a: Vec<f64>,
    pub b: Vec<f64>,
    pub im_f0: Vec<f64>,
    pub s: Option<f64>,
    pub kobayashi: Option<f64>,
    pub residuals: [f64; 2],
    pub case_label: FCaseLabel,
    pub singular_points: Vec<f64>,
    pub real_curve: bool,
    pub stats: SolveStats,
    pub grid: Vec<GridValue>,
    pub limits: Option<LimitReport>,
}

fn max_abs(v: &CVec) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Richardson-extrapolated `lim_{r→1} Re f(r e^{it})`.
pub fn radial_real_limit(map: &GeodesicMap, t: f64) -> Result<RVec> {
    let lams: Vec<Complex64> = RADII.iter().map(|&r| Complex64::from_polar(r, t)).collect();
    let vals = map.eval_many(&lams)?;
    let hs: Vec<f64> = RADII.iter().map(|r| 1.0 - r).collect();
    let n = map.params().dim();
    Ok(RVec::from_iterator(
        n,
        (0..n).map(|i| {
            let v: Vec<f64> = vals.iter().map(|x| x[i].re).collect();
            extrapolate_to_zero(&hs, &v)
        }),
    ))
}
