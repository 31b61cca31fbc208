use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::solve::{is_real_pair, ConnectOptions, Problem};
use super::trace::{radial_real_limit, Anchors, GeodesicTrace};
use crate::base_geometry::BaseDomain;
use crate::error::Result;
use crate::tube::TubePoint;

const RADII: [f64; 6] = [0.0, 0.3, 0.6, 0.9, 0.99, 0.999];
const ANGLES: usize = 24;

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    /// Largest `|ρ(g(t))|` over the stored profile.
    pub max_boundary_residual: f64,
    /// Largest `1 − cos∠(ν(g(t)), F̃(t))` away from singular points.
    pub max_misalignment: f64,
    /// Largest `ρ(Re f(λ))` over disc samples up to `|λ| = 0.999`.
    pub max_interior_rho: f64,
    /// Anchor residual recomputed from the map.
    pub endpoint_residual: f64,
    pub on_boundary: bool,
    pub aligned: bool,
    pub interior: bool,
    pub endpoints: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.on_boundary && self.aligned && self.interior && self.endpoints
    }
}

/// Checks a trace against the defining properties of the family: boundary
/// values on `∂Ω`, normals aligned with `F̃`, `Re f` inside `Ω`, and the anchors.
pub fn verify_geodesic(domain: &BaseDomain, trace: &GeodesicTrace) -> Result<VerificationReport> {
    let params = &trace.params;
    let mut max_boundary_residual: f64 = 0.0;
    let mut max_misalignment: f64 = 0.0;
    for (t, g) in trace.profile.angles().iter().zip(trace.profile.values()) {
        let Some(g) = g else { continue };
        max_boundary_residual = max_boundary_residual.max(domain.rho(g).abs());
        if let (Some(dir), Ok(nu)) = (params.direction(*t), domain.gauss_map(g)) {
            max_misalignment = max_misalignment.max(1.0 - nu.dot(&dir));
        }
    }
    let mut max_interior_rho = f64::NEG_INFINITY;
    for &r in &RADII {
        let count = if r == 0.0 { 1 } else { ANGLES };
        let lams: Vec<Complex64> = (0..count).map(|j| Complex64::from_polar(r, TAU * j as f64 / count as f64)).collect();
        for v in trace.map.eval_many(&lams)? {
            let x = crate::linalg::re(&v);
            max_interior_rho = max_interior_rho.max(domain.rho(&x));
        }
    }
    let endpoint_residual = match &trace.anchors {
        Anchors::Interior { w, z, s, .. } => {
            let v = trace.map.eval_many(&[Complex64::new(0.0, 0.0), Complex64::new(*s, 0.0)])?;
            let e0 = (&v[0] - &w.0).iter().map(|c| c.norm()).fold(0.0, f64::max);
            let e1 = (&v[1] - &z.0).iter().map(|c| c.norm()).fold(0.0, f64::max);
            e0.max(e1)
        }
        Anchors::Boundary { x, y } => {
            let xm = radial_real_limit(&trace.map, std::f64::consts::PI)?;
            let yp = radial_real_limit(&trace.map, 0.0)?;
            (xm - x).amax().max((yp - y).amax())
        }
    };
    let endpoint_tol = match trace.anchors {
        Anchors::Interior { .. } => 1e-8,
        Anchors::Boundary { .. } => 1e-6,
    };
    Ok(VerificationReport {
        max_boundary_residual,
        max_misalignment,
        max_interior_rho,
        endpoint_residual,
        on_boundary: max_boundary_residual <= 1e-8,
        aligned: max_misalignment <= 1e-8,
        interior: max_interior_rho < 0.0,
        endpoints: endpoint_residual <= endpoint_tol,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UniquenessReport {
    pub starts: usize,
    pub converged: usize,
    /// Kobayashi values of the converged starts.
    pub distances: Vec<f64>,
    /// Largest profile distance to the first converged solution.
    pub max_profile_deviation: f64,
    pub max_distance_spread: f64,
    pub real_pair: bool,
    /// For real pairs: largest `|Im f(r) − Im w|` on the real diameter, over
    /// all converged solutions (solved with complex `a`).
    pub max_imag_on_diameter: Option<f64>,
}

impl UniquenessReport {
    pub fn unique(&self, tol: f64) -> bool {
        self.converged >= 2 && self.max_profile_deviation <= tol && self.max_distance_spread <= tol
    }
}

/// Solves the same two-point problem from `restarts` independent starts with
/// complex `a` and compares the solutions.
pub fn uniqueness_probe(domain: &BaseDomain, w: &TubePoint, z: &TubePoint, restarts: usize) -> Result<UniquenessReport> {
    let opts = ConnectOptions { force_complex: true, ..ConnectOptions::default() };
    let problem = Problem::new(domain, w, z, &opts)?;
    let starts = problem.starts(restarts, opts.seed ^ 0x51de);
    let real_pair = is_real_pair(w, z);
    let diameter: Vec<f64> = (0..=20).map(|k| -0.95 + 0.095 * k as f64).collect();
    let mut traces: Vec<GeodesicTrace> = Vec::new();
    for start in &starts {
        let Some(sol) = problem.solve_from(start, opts.max_iterations, 1e-12) else { continue };
        if sol.residual <= opts.converge {
            traces.push(problem.trace(&sol, 1, sol.iterations)?);
        }
    }
    let distances: Vec<f64> = traces.iter().filter_map(|t| t.kobayashi()).collect();
    let (mut dev, mut spread): (f64, f64) = (0.0, 0.0);
    if let Some(first) = traces.first() {
        for t in &traces[1..] {
            dev = dev.max(first.profile.distance(&t.profile, 1e-3));
        }
        let lo = distances.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = distances.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        spread = hi - lo;
    }
    let max_imag_on_diameter = if real_pair {
        let mut worst: f64 = 0.0;
        for t in &traces {
            worst = worst.max(t.max_imag_on_diameter(&diameter)?);
        }
        Some(worst)
    } else {
        None
    };
    Ok(UniquenessReport {
        starts: starts.len(),
        converged: traces.len(),
        distances,
        max_profile_deviation: dev,
        max_distance_spread: spread,
        real_pair,
        max_imag_on_diameter,
    })
}
