use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::trace::{Anchors, GeodesicTrace, SolveMode, SolveStats};
use crate::base_geometry::BaseDomain;
use crate::error::{Error, Result};
use crate::geodesic_family::{GeodesicMap, GeodesicParams};
use crate::linalg::{self, CVec, RVec};
use crate::metrics::{affine_lower_bound, check_points};
use crate::tube::TubePoint;

const FD_STEP: f64 = 1e-6;
// distances are searched in [K_MIN, K_MAX]; past K_MAX the anchors sit
// within 3e-8 of the circle and the quadrature cost explodes
const K_MIN: f64 = 1e-10;
const K_MAX: f64 = 18.0;
const STALL_WINDOW: usize = 20;
const HEURISTIC_STARTS: usize = 5;

#[derive(Clone, Debug)]
pub struct ConnectOptions {
    pub max_starts: usize,
    pub max_iterations: usize,
    pub seed: u64,
    /// Solve over complex `a` even when `Im w = Im z`.
    pub force_complex: bool,
    /// Quadrature tolerance on `f` used inside the residual.
    pub quadrature_tol: f64,
    /// A start counts as converged below this max-norm residual.
    pub converge: f64,
    /// The best start is accepted below this residual.
    pub accept: f64,
}

impl Default for ConnectOptions {
    fn default() -> Self {
        ConnectOptions {
            max_starts: 16,
            max_iterations: 200,
            seed: 0x7ab5_e0de,
            force_complex: false,
            quadrature_tol: 1e-12,
            converge: 1e-9,
            accept: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Start {
    pub p: RVec,
    pub tau: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct Solution {
    pub p: RVec,
    pub tau: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// The two-point problem in symmetric position: `f(−r) = w`, `f(r) = z` with
/// `r = tanh(k/2)` and `k = e^τ` the distance. The unknowns are `(a, b)` on the
/// unit sphere and `τ`; `Im f(0)` is eliminated. Solutions are moved to
/// `f(0) = w` by a disc automorphism afterwards.
pub(crate) struct Problem<'a> {
    domain: &'a BaseDomain,
    w: &'a TubePoint,
    z: &'a TubePoint,
    mode: SolveMode,
    n: usize,
    tol: f64,
}

impl<'a> Problem<'a> {
    pub fn new(domain: &'a BaseDomain, w: &'a TubePoint, z: &'a TubePoint, opts: &ConnectOptions) -> Result<Self> {
        check_points(domain, w, z)?;
        if !domain.is_smooth() {
            return Err(Error::Unsupported(format!("{} base: the geodesic solver needs a smooth strictly convex base", domain.kind())));
        }
        if w == z {
            return Err(Error::Argument("cannot connect a point to itself".into()));
        }
        let mode = if is_real_pair(w, z) && !opts.force_complex { SolveMode::Real } else { SolveMode::Complex };
        Ok(Problem { domain, w, z, mode, n: domain.dim(), tol: opts.quadrature_tol })
    }

    fn sphere_dim(&self) -> usize {
        match self.mode {
            SolveMode::Real => 2 * self.n,
            _ => 3 * self.n,
        }
    }

    pub fn params(&self, p: &RVec) -> Result<GeodesicParams> {
        let n = self.n;
        let (re_a, im_a, b) = match self.mode {
            SolveMode::Real => (p.rows(0, n).into_owned(), RVec::zeros(n), p.rows(n, n).into_owned()),
            _ => (p.rows(0, n).into_owned(), p.rows(n, n).into_owned(), p.rows(2 * n, n).into_owned()),
        };
        GeodesicParams::new(linalg::complexify(&re_a, &im_a), b, RVec::zeros(n))
    }

    /// Packs `(a, b)` into the sphere coordinates of this mode.
    pub fn pack(&self, a: &CVec, b: &RVec) -> Option<RVec> {
        let mut p: Vec<f64> = a.iter().map(|c| c.re).collect();
        if self.mode != SolveMode::Real {
            p.extend(a.iter().map(|c| c.im));
        }
        p.extend(b.iter());
        linalg::unit(&RVec::from_vec(p))
    }

    fn residual(&self, p: &RVec, tau: f64) -> Option<DVector<f64>> {
        let params = self.params(p).ok()?;
        let map = GeodesicMap::new(self.domain, params).ok()?.with_tolerance(self.tol);
        let r = (0.5 * tau.exp()).tanh();
        let v = map.eval_many(&[Complex64::new(-r, 0.0), Complex64::new(r, 0.0)]).ok()?;
        let n = self.n;
        let m = self.sphere_dim();
        let mut out = DVector::zeros(m);
        for i in 0..n {
            out[i] = v[0][i].re - self.w.0[i].re;
            out[n + i] = v[1][i].re - self.z.0[i].re;
            if m == 3 * n {
                out[2 * n + i] = (v[1][i].im - v[0][i].im) - (self.z.0[i].im - self.w.0[i].im);
            }
        }
        out.iter().all(|x| x.is_finite()).then_some(out)
    }

    /// Levenberg–Marquardt on `S^{K−1} × ℝ` in tangent coordinates.
    pub fn solve_from(&self, start: &Start, max_iter: usize, target: f64) -> Option<Solution> {
        let k = self.sphere_dim();
        let (tau_min, tau_max) = (K_MIN.ln(), K_MAX.ln());
        let mut p = start.p.clone();
        let mut tau = start.tau.clamp(tau_min, tau_max);
        let mut r = self.residual(&p, tau)?;
        let mut mu = 1e-3;
        let mut iterations = 0;
        let mut checkpoint = r.norm();
        let step = |p: &RVec, t: &DMatrix<f64>, xi: &DVector<f64>| -> RVec {
            let q = p + t * xi;
            &q / q.norm()
        };
        while iterations < max_iter && r.amax() > target {
            iterations += 1;
            let t = linalg::tangent_basis(&p);
            let mut jac = DMatrix::zeros(r.len(), k);
            for j in 0..k {
                let (rp, rm) = if j + 1 < k {
                    let mut e = DVector::zeros(k - 1);
                    e[j] = FD_STEP;
                    (self.residual(&step(&p, &t, &e), tau)?, self.residual(&step(&p, &t, &(-e)), tau)?)
                } else {
                    (self.residual(&p, tau + FD_STEP)?, self.residual(&p, tau - FD_STEP)?)
                };
                jac.set_column(j, &((rp - rm) / (2.0 * FD_STEP)));
            }
            let jtj = jac.transpose() * &jac;
            let g = jac.transpose() * &r;
            let mut improved = false;
            while mu < 1e12 {
                let mut lhs = jtj.clone();
                for i in 0..k {
                    lhs[(i, i)] += mu * jtj[(i, i)].max(1e-12);
                }
                let Some(delta) = lhs.lu().solve(&(-&g)) else {
                    mu *= 10.0;
                    continue;
                };
                let mut xi = delta.rows(0, k - 1).into_owned();
                if xi.norm() > 0.5 {
                    xi *= 0.5 / xi.norm();
                }
                let p_new = step(&p, &t, &xi);
                let tau_new = (tau + delta[k - 1].clamp(-1.0, 1.0)).clamp(tau_min, tau_max);
                match self.residual(&p_new, tau_new) {
                    Some(r_new) if r_new.norm() < r.norm() => {
                        p = p_new;
                        tau = tau_new;
                        r = r_new;
                        mu = (mu / 5.0).max(1e-12);
                        improved = true;
                        break;
                    }
                    _ => mu *= 6.0,
                }
            }
            if !improved {
                break;
            }
            // give up on starts that stall far from a solution
            if iterations % STALL_WINDOW == 0 {
                if r.norm() > 0.5 * checkpoint && r.amax() > 1e-6 {
                    break;
                }
                checkpoint = r.norm();
            }
        }
        Some(Solution { residual: r.amax(), p, tau, iterations })
    }

    /// Deterministic starting points: direction heuristics first, then seeded draws.
    pub fn starts(&self, count: usize, seed: u64) -> Vec<Start> {
        let n = self.n;
        let d = &self.z.0 - &self.w.0;
        let dn = linalg::cnorm(&d);
        let lower = affine_lower_bound(self.domain, self.w, self.z, 64).unwrap_or(dn);
        let tau0 = (1.05 * lower).max(K_MIN).ln();
        let a_d: CVec = d.map(|c| c / dn);
        let re_d = linalg::unit(&linalg::re(&d));
        let zero = RVec::zeros(n);
        let mut out = Vec::new();
        let push = |a: &CVec, b: &RVec, tau: f64, out: &mut Vec<Start>| {
            if let Some(p) = self.pack(a, b) {
                if self.params(&p).is_ok() {
                    out.push(Start { p, tau });
                }
            }
        };
        push(&a_d, &zero, tau0, &mut out);
        if let Some(u) = &re_d {
            let a = u.map(|x| Complex64::new(0.5 * x, 0.0));
            push(&a, &zero, tau0, &mut out);
            push(&(-a.clone()), &zero, tau0, &mut out);
        }
        let mid = (self.w.re() + self.z.re()) * 0.5 - self.domain.x0();
        let r = self.domain.bounding_radius();
        for c in [0.5, 1.5] {
            push(&a_d, &(&mid * (c / r)), tau0, &mut out);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut normal = move || -> f64 { StandardNormal.sample(&mut rng) };
        let mut guard = 0;
        while out.len() < count && guard < 50 * count {
            guard += 1;
            let a = CVec::from_fn(n, |_, _| Complex64::new(normal(), normal()));
            let b = RVec::from_fn(n, |_, _| 0.5 * normal());
            let tau = tau0 + 0.5 * normal();
            push(&a, &b, tau, &mut out);
        }
        out.truncate(count);
        out
    }

    /// Walks `z_t = w + t(z − w)` from `t` small to 1, restarting each solve
    /// from the previous solution.
    pub fn continuation(&self, start: &Start, max_iter: usize, converge: f64) -> Option<Solution> {
        let (mut t, mut dt): (f64, f64) = (0.0, 0.2);
        let mut current = start.clone();
        let mut total = 0;
        let mut last = None;
        while t < 1.0 && dt > 1e-3 {
            let t_next = (t + dt).min(1.0);
            let z_t = TubePoint::from_complex((&self.w.0 + (&self.z.0 - &self.w.0) * Complex64::new(t_next, 0.0)).iter().copied().collect());
            let sub = Problem { z: &z_t, ..*self };
            match sub.solve_from(&current, max_iter, 1e-12) {
                Some(sol) if sol.residual <= converge => {
                    total += sol.iterations;
                    current = Start { p: sol.p.clone(), tau: sol.tau };
                    t = t_next;
                    dt *= 1.5;
                    last = Some(Solution { iterations: total, ..sol });
                }
                _ => dt *= 0.5,
            }
        }
        if t < 1.0 {
            return None;
        }
        last
    }

    /// Moves the symmetric solution to `f(0) = w`, `f(tanh k) = z`.
    pub fn trace(&self, sol: &Solution, starts: usize, iterations: usize) -> Result<GeodesicTrace> {
        let k = sol.tau.exp();
        let r = (0.5 * k).tanh();
        let base = GeodesicMap::new(self.domain, self.params(&sol.p)?)?;
        let map = GeodesicMap::precomposed(base, -r, self.w.im())?;
        let anchors = Anchors::Interior { w: self.w.clone(), z: self.z.clone(), s: k.tanh(), distance: k };
        let stats = SolveStats { mode: self.mode, starts, iterations, best_residual: sol.residual };
        GeodesicTrace::from_map(map, anchors, stats)
    }
}

pub(crate) fn is_real_pair(w: &TubePoint, z: &TubePoint) -> bool {
    (w.im() - z.im()).amax() <= 1e-14 * (1.0 + w.im().amax())
}

/// The complex geodesic through `w` and `z`: `f(0) = w`, `f(s) = z`, `0 < s < 1`.
pub fn connect(domain: &BaseDomain, w: &TubePoint, z: &TubePoint) -> Result<GeodesicTrace> {
    connect_with(domain, w, z, &ConnectOptions::default())
}

pub fn connect_with(domain: &BaseDomain, w: &TubePoint, z: &TubePoint, opts: &ConnectOptions) -> Result<GeodesicTrace> {
    let problem = Problem::new(domain, w, z, opts)?;
    let starts = problem.starts(opts.max_starts, opts.seed);
    let mut best: Option<Solution> = None;
    let mut iterations = 0;
    let mut tried = 0;
    for (i, start) in starts.iter().enumerate() {
        tried += 1;
        // after the direction heuristics, fall back to continuation from the first start
        let sol = if i == HEURISTIC_STARTS {
            problem.continuation(&starts[0], opts.max_iterations, opts.converge)
        } else {
            problem.solve_from(start, opts.max_iterations, 1e-12)
        };
        let Some(sol) = sol else { continue };
        iterations += sol.iterations;
        if best.as_ref().map_or(true, |b| sol.residual < b.residual) {
            best = Some(sol);
        }
        if best.as_ref().is_some_and(|b| b.residual <= opts.converge) {
            break;
        }
    }
    let Some(best) = best else {
        return Err(Error::numeric("no start produced a valid geodesic", f64::INFINITY));
    };
    if best.residual > opts.accept {
        return Err(Error::numeric(format!("two-point problem unsolved after {tried} starts"), best.residual));
    }
    problem.trace(&best, tried, iterations)
}

/// `k_{T_Ω}(w, z)`, zero on the diagonal.
pub fn kobayashi_distance(domain: &BaseDomain, w: &TubePoint, z: &TubePoint) -> Result<f64> {
    check_points(domain, w, z)?;
    if w == z {
        return Ok(0.0);
    }
    let trace = connect(domain, w, z)?;
    Ok(trace.kobayashi().expect("interior trace"))
}

/// The explicit geodesic with `Re f(−1) = x`, `Re f(1) = y` for boundary
/// points `x ≠ y`: `a = (v − u)/4`, `b = (u + v)/2` with `u, v` the normals.
pub fn connect_boundary(domain: &BaseDomain, x: &RVec, y: &RVec) -> Result<GeodesicTrace> {
    if x.len() != domain.dim() || y.len() != domain.dim() {
        return Err(Error::Argument("boundary points of the wrong dimension".into()));
    }
    for p in [x, y] {
        if !domain.on_boundary(p) {
            return Err(Error::Domain(format!("{} is not on ∂Ω (residual {:.3e})", TubePoint::real(p.as_slice()), domain.boundary_residual(p))));
        }
    }
    if (x - y).amax() <= 1e-12 {
        return Err(Error::Domain("boundary points must be distinct".into()));
    }
    let u = domain.gauss_map(x)?;
    let v = domain.gauss_map(y)?;
    let a = (&v - &u).map(|c| Complex64::new(0.25 * c, 0.0));
    let b = (&u + &v) * 0.5;
    let params = GeodesicParams::new(a, b, RVec::zeros(domain.dim()))?;
    let stats = SolveStats { mode: SolveMode::Explicit, starts: 0, iterations: 0, best_residual: 0.0 };
    GeodesicTrace::from_params(domain, params, Anchors::Boundary { x: x.clone(), y: y.clone() }, stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_distance_on_the_disc_diameter() {
        let ball = BaseDomain::unit_ball(2);
        let w = TubePoint::real(&[0.0, 0.0]);
        let z = TubePoint::real(&[0.5, 0.0]);
        let trace = connect(&ball, &w, &z).unwrap();
        let expected = (std::f64::consts::PI / 8.0).tan().atanh();
        assert!((trace.kobayashi().unwrap() - expected).abs() < 1e-8, "{:?}", trace.kobayashi());
        assert!(trace.max_residual() < 1e-9);
    }

    #[test]
    fn same_point_is_rejected() {
        let ball = BaseDomain::unit_ball(2);
        let w = TubePoint::real(&[0.1, 0.0]);
        assert!(matches!(connect(&ball, &w, &w), Err(Error::Argument(_))));
        assert_eq!(kobayashi_distance(&ball, &w, &w).unwrap(), 0.0);
    }
}
