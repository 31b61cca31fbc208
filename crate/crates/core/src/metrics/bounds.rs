//! Two independent Kobayashi oracles for `T_Ω`: a lower bound from linear
//! projections onto strips and an upper bound from polynomial discs.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::models::strip_distance;
use crate::base_geometry::{random_unit, BaseDomain};
use crate::error::{Error, Result};
use crate::linalg::{self, RVec};
use crate::tube::TubePoint;

pub(crate) fn check_points(domain: &BaseDomain, w: &TubePoint, z: &TubePoint) -> Result<()> {
    for p in [w, z] {
        if p.dim() != domain.dim() {
            return Err(Error::Argument(format!("point of dimension {} for a base of dimension {}", p.dim(), domain.dim())));
        }
        if !domain.contains(&p.re()) {
            return Err(Error::Argument(format!("point outside base: Re {} ∉ Ω", TubePoint::real(p.re().as_slice()))));
        }
    }
    Ok(())
}

fn pairing(p: &TubePoint, u: &RVec) -> Complex64 {
    p.as_slice().iter().zip(u.iter()).map(|(c, x)| c * *x).sum()
}

/// Strip distance of `⟨w,u⟩, ⟨z,u⟩` in `{−h(−u) < Re < h(u)}`.
fn direction_value(domain: &BaseDomain, w: &TubePoint, z: &TubePoint, u: &RVec) -> f64 {
    let (Ok(hi), Ok(lo)) = (domain.support_value(u), domain.support_value(&(-u))) else { return 0.0 };
    strip_distance(-lo, hi, pairing(w, u), pairing(z, u)).unwrap_or(0.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct AffineBound {
    pub value: f64,
    pub direction: Vec<f64>,
}

/// Quasi-uniform directions on the half-sphere (antipodes give the same strip).
pub fn sphere_directions(n: usize, count: usize) -> Vec<RVec> {
    match n {
        1 => vec![linalg::rvec(&[1.0])],
        2 => (0..count)
            .map(|k| {
                let t = PI * k as f64 / count as f64;
                linalg::rvec(&[t.cos(), t.sin()])
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    // Fibonacci lattice on the upper hemisphere
                    let y = 1.0 - (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - y * y).sqrt();
                    let th = golden * k as f64;
                    linalg::rvec(&[r * th.cos(), r * th.sin(), y])
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d1e5);
            (0..count).map(|_| random_unit(&mut rng, n)).collect()
        }
    }
}

/// `max_u k_strip(⟨w,u⟩, ⟨z,u⟩)` over `directions` quasi-uniform unit vectors,
/// the coordinate axes and the real and imaginary chord directions, refined by
/// a local search. Never exceeds `k_{T_Ω}(w, z)`.
pub fn affine_lower_bound(domain: &BaseDomain, w: &TubePoint, z: &TubePoint, directions: usize) -> Result<f64> {
    Ok(affine_lower_bound_detailed(domain, w, z, directions)?.value)
}

pub fn affine_lower_bound_detailed(domain: &BaseDomain, w: &TubePoint, z: &TubePoint, directions: usize) -> Result<AffineBound> {
    check_points(domain, w, z)?;
    let n = domain.dim();
    if w == z {
        return Ok(AffineBound { value: 0.0, direction: linalg::basis(n, 0).as_slice().to_vec() });
    }
    let mut cands = sphere_directions(n, directions.max(1));
    for i in 0..n {
        cands.push(linalg::basis(n, i));
    }
    cands.extend(linalg::unit(&(z.re() - w.re())));
    cands.extend(linalg::unit(&(z.im() - w.im())));
    let mut best = (f64::NEG_INFINITY, cands[0].clone());
    for u in cands {
        let v = direction_value(domain, w, z, &u);
        if v > best.0 {
            best = (v, u);
        }
    }
    if n > 1 {
        for step in [0.1, 0.03, 0.01, 0.003, 0.001, 3e-4, 1e-4] {
            loop {
                let tb = linalg::tangent_basis(&best.1);
                let mut improved = false;
                for k in 0..n - 1 {
                    for sgn in [1.0, -1.0] {
                        let u = linalg::unit(&(&best.1 + tb.column(k) * (sgn * step))).unwrap();
                        let v = direction_value(domain, w, z, &u);
                        if v > best.0 {
                            best = (v, u);
                            improved = true;
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
        }
    }
    Ok(AffineBound { value: best.0.max(0.0), direction: best.1.as_slice().to_vec() })
}

/// Upper bound from two straight moves: change the imaginary part along a
/// complex line, then the real part (and the other order); each leg is a
/// strip distance in the slice of `T_Ω` by that line.
pub fn chain_upper_bound(domain: &BaseDomain, w: &TubePoint, z: &TubePoint) -> Result<f64> {
    check_points(domain, w, z)?;
    let leg = |base: &RVec, dir: &RVec, target: Complex64| -> Result<f64> {
        let len = dir.norm();
        if len == 0.0 {
            return Ok(0.0);
        }
        let e = dir / len;
        let hi = domain.boundary_intersection(base, &e)?;
        let lo = domain.boundary_intersection(base, &(-&e))?;
        strip_distance(-lo, hi, Complex64::new(0.0, 0.0), target * len)
    };
    let (rw, rz) = (w.re(), z.re());
    let (dre, dim) = (&rz - &rw, z.im() - w.im());
    let imag_first = leg(&rw, &dim, Complex64::i())? + leg(&rw, &dre, Complex64::new(1.0, 0.0))?;
    let real_first = leg(&rw, &dre, Complex64::new(1.0, 0.0))? + leg(&rz, &dim, Complex64::i())?;
    Ok(imag_first.min(real_first))
}

#[derive(Clone, Debug, Serialize)]
pub struct LempertBound {
    /// `p(0, λ*)` for the best feasible disc, or the chain bound on fallback.
    pub value: f64,
    pub lambda: f64,
    pub degree: usize,
    /// True when no polynomial disc was certified and the chain bound is returned.
    pub fallback: bool,
    /// Largest gauge of `Re φ` on the verification grid (< 1 when certified).
    pub max_gauge: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct LempertOptions {
    pub degree: usize,
    /// Optimisation grid on the circle; verification uses 8× as many points.
    pub grid: usize,
    /// Containment margin on the gauge.
    pub margin: f64,
    /// Bisection stops when the bracket on `p(0, λ*)` is this narrow.
    pub tol: f64,
}

impl Default for LempertOptions {
    fn default() -> Self {
        LempertOptions { degree: 4, grid: 512, margin: 1e-6, tol: 1e-4 }
    }
}

/// Polynomial discs `φ(ζ) = w + (z−w)ζ/λ + ζ(ζ−λ)Q(ζ)`, `deg Q ≤ d − 2`.
struct DiscFamily<'a> {
    domain: &'a BaseDomain,
    n: usize,
    degree: usize,
    w_re: RVec,
    d: Vec<Complex64>,
    coarse: Vec<f64>,
    fine: Vec<f64>,
}

impl<'a> DiscFamily<'a> {
    fn unknowns(&self) -> usize {
        2 * self.n * (self.degree.saturating_sub(1))
    }

    /// `Re φ(e^{iθ})` and the basis values `ψ_k(e^{iθ}) = e^{iθ(k+1)}(e^{iθ} − λ)`.
    fn re_phi(&self, lam: f64, theta: f64, x: &[f64], psi: &mut Vec<Complex64>) -> RVec {
        let e = Complex64::from_polar(1.0, theta);
        psi.clear();
        let mut pk = e * (e - lam);
        for _ in 0..self.degree.saturating_sub(1) {
            psi.push(pk);
            pk *= e;
        }
        let mut out = self.w_re.clone();
        for i in 0..self.n {
            out[i] += (self.d[i] * e).re / lam;
            for (k, p) in psi.iter().enumerate() {
                let idx = 2 * (k * self.n + i);
                out[i] += x[idx] * p.re - x[idx + 1] * p.im;
            }
        }
        out
    }

    fn max_gauge(&self, lam: f64, x: &[f64], grid: &[f64]) -> f64 {
        let mut psi = Vec::new();
        grid.iter().map(|&t| self.domain.gauge(&self.re_phi(lam, t, x, &mut psi))).fold(0.0, f64::max)
    }

    /// Log-sum-exp of the gauge values on the coarse grid, its gradient and the plain max.
    fn smooth_max(&self, lam: f64, beta: f64, x: &[f64], grad: &mut [f64]) -> (f64, f64) {
        let mut psi = Vec::new();
        let k = self.coarse.len();
        let mut vals = Vec::with_capacity(k);
        let mut grads: Vec<(RVec, Vec<Complex64>)> = Vec::with_capacity(k);
        for &t in &self.coarse {
            let p = self.re_phi(lam, t, x, &mut psi);
            vals.push(self.domain.gauge(&p));
            grads.push((self.domain.gauge_grad(&p), psi.clone()));
        }
        let vmax = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = vals.iter().map(|v| (beta * (v - vmax)).exp()).collect();
        let total: f64 = weights.iter().sum();
        grad.iter_mut().for_each(|g| *g = 0.0);
        for (j, (gg, ps)) in grads.iter().enumerate() {
            let wj = weights[j] / total;
            for (kk, p) in ps.iter().enumerate() {
                for i in 0..self.n {
                    let idx = 2 * (kk * self.n + i);
                    grad[idx] += wj * gg[i] * p.re;
                    grad[idx + 1] -= wj * gg[i] * p.im;
                }
            }
        }
        (vmax + total.ln() / beta, vmax)
    }

    /// Searches for `Q` with `Re φ(𝕋) ⊂ {gauge ≤ 1 − margin}`; `x` carries the
    /// warm start in and the certified coefficients out.
    fn feasible(&self, lam: f64, x: &mut Vec<f64>, margin: f64) -> Option<f64> {
        let m = self.unknowns();
        if x.len() != m {
            x.resize(m, 0.0);
        }
        let target = 1.0 - margin;
        let check = |xx: &[f64]| {
            let g = self.max_gauge(lam, xx, &self.fine);
            (g <= target).then_some(g)
        };
        if let Some(g) = check(x) {
            return Some(g);
        }
        if m == 0 {
            return None;
        }
        let ln_k = (self.coarse.len() as f64).ln();
        let mut grad = vec![0.0; m];
        for beta in [30.0, 300.0, 3000.0, 30000.0] {
            let mut state = x.clone();
            let (val, plain) = lbfgs(
                |xx, gg| self.smooth_max(lam, beta, xx, gg),
                &mut state,
                &mut grad,
                200,
                target - 0.5 * margin,
            );
            *x = state;
            if plain <= target {
                if let Some(g) = check(x) {
                    return Some(g);
                }
            }
            if val - ln_k / beta > 1.0 + 1e-3 {
                return None;
            }
        }
        None
    }
}

/// Limited-memory BFGS with Armijo backtracking on a smooth objective that
/// also reports a plain value; stops early once the plain value drops below
/// `stop_below`. Returns the final (smooth, plain) pair.
fn lbfgs<F>(mut f: F, x: &mut Vec<f64>, grad: &mut Vec<f64>, iters: usize, stop_below: f64) -> (f64, f64)
where
    F: FnMut(&[f64], &mut [f64]) -> (f64, f64),
{
    let m = x.len();
    let mem = 8;
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let (mut fx, mut plain) = f(x, grad);
    let mut g_new = vec![0.0; m];
    for _ in 0..iters {
        if plain <= stop_below {
            break;
        }
        // two-loop recursion
        let mut q = grad.clone();
        let mut alphas = Vec::with_capacity(s_hist.len());
        for (s, y) in s_hist.iter().zip(&y_hist).rev() {
            let rho = 1.0 / dot(y, s);
            let a = rho * dot(s, &q);
            axpy(-a, y, &mut q);
            alphas.push((a, rho));
        }
        if let (Some(s), Some(y)) = (s_hist.last(), y_hist.last()) {
            let gamma = dot(s, y) / dot(y, y);
            q.iter_mut().for_each(|v| *v *= gamma);
        } else {
            let gn = dot(grad, grad).sqrt();
            if gn > 0.0 {
                let scale = 0.1 / gn;
                q.iter_mut().for_each(|v| *v *= scale);
            }
        }
        for ((s, y), (a, rho)) in s_hist.iter().zip(&y_hist).zip(alphas.into_iter().rev()) {
            let b = rho * dot(y, &q);
            axpy(a - b, s, &mut q);
        }
        let dir: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(grad, &dir);
        let dir = if slope >= 0.0 {
            s_hist.clear();
            y_hist.clear();
            slope = -dot(grad, grad);
            grad.iter().map(|v| -v).collect()
        } else {
            dir
        };
        if slope.abs() < 1e-30 {
            break;
        }
        let mut step = 1.0;
        let mut accepted = false;
        let mut x_new = x.clone();
        for _ in 0..40 {
            for i in 0..m {
                x_new[i] = x[i] + step * dir[i];
            }
            let (fn_, pn) = f(&x_new, &mut g_new);
            if fn_ <= fx + 1e-4 * step * slope {
                let s: Vec<f64> = (0..m).map(|i| x_new[i] - x[i]).collect();
                let y: Vec<f64> = (0..m).map(|i| g_new[i] - grad[i]).collect();
                if dot(&s, &y) > 1e-16 {
                    s_hist.push(s);
                    y_hist.push(y);
                    if s_hist.len() > mem {
                        s_hist.remove(0);
                        y_hist.remove(0);
                    }
                }
                let progress = fx - fn_;
                x.copy_from_slice(&x_new);
                grad.copy_from_slice(&g_new);
                fx = fn_;
                plain = pn;
                accepted = true;
                if progress < 1e-15 * (1.0 + fx.abs()) {
                    return (fx, plain);
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (fx, plain)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn lempert_upper_bound(domain: &BaseDomain, w: &TubePoint, z: &TubePoint, degree: usize) -> Result<LempertBound> {
    lempert_upper_bound_with(domain, w, z, &LempertOptions { degree, ..Default::default() }, None)
}

/// Bisection on `p(0, λ)` for the smallest `λ` admitting a certified disc of the
/// given degree. `known` is a `p` value already certified at this or a lower
/// degree; it caps the result so that raising the degree never loosens it.
pub fn lempert_upper_bound_with(
    domain: &BaseDomain,
    w: &TubePoint,
    z: &TubePoint,
    opts: &LempertOptions,
    known: Option<&LempertBound>,
) -> Result<LempertBound> {
    check_points(domain, w, z)?;
    if opts.degree == 0 {
        return Err(Error::Argument("polynomial disc degree must be at least 1".into()));
    }
    if w == z {
        return Ok(LempertBound { value: 0.0, lambda: 0.0, degree: opts.degree, fallback: false, max_gauge: domain.gauge(&w.re()) });
    }
    let n = domain.dim();
    let grid = |k: usize| (0..k).map(|j| TAU * j as f64 / k as f64).collect::<Vec<_>>();
    let fam = DiscFamily {
        domain,
        n,
        degree: opts.degree,
        w_re: w.re(),
        d: (0..n).map(|i| z.as_slice()[i] - w.as_slice()[i]).collect(),
        coarse: grid(opts.grid),
        fine: grid(8 * opts.grid),
    };
    let lower = affine_lower_bound(domain, w, z, 64)?;
    let chain = chain_upper_bound(domain, w, z)?;
    let mut x = vec![0.0; fam.unknowns()];
    let mut best: Option<(f64, f64)> = None; // (p, max gauge)
    if let Some(k) = known.filter(|k| !k.fallback && k.degree <= opts.degree) {
        best = Some((k.value, k.max_gauge));
    }
    if best.is_none() {
        let mut p = chain.max(lower + opts.tol);
        for _ in 0..8 {
            if let Some(g) = fam.feasible(p.tanh(), &mut x, opts.margin) {
                best = Some((p, g));
                break;
            }
            p = p * 1.5 + 0.1;
        }
    }
    let Some((mut hi, mut gauge)) = best else {
        return Ok(LempertBound { value: chain, lambda: chain.tanh(), degree: opts.degree, fallback: true, max_gauge: f64::NAN });
    };
    let mut lo = lower;
    let mut x_hi = x.clone();
    for _ in 0..60 {
        if hi - lo <= opts.tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let mut trial = x_hi.clone();
        match fam.feasible(mid.tanh(), &mut trial, opts.margin) {
            Some(g) => {
                hi = mid;
                gauge = g;
                x_hi = trial;
            }
            None => lo = mid,
        }
    }
    if chain < hi {
        return Ok(LempertBound { value: chain, lambda: chain.tanh(), degree: opts.degree, fallback: true, max_gauge: gauge });
    }
    Ok(LempertBound { value: hi, lambda: hi.tanh(), degree: opts.degree, fallback: false, max_gauge: gauge })
}

/// Bounds for increasing degrees, each capped by its predecessor.
pub fn lempert_ladder(domain: &BaseDomain, w: &TubePoint, z: &TubePoint, degrees: &[usize]) -> Result<Vec<LempertBound>> {
    let mut out: Vec<LempertBound> = Vec::new();
    for &d in degrees {
        let opts = LempertOptions { degree: d, ..Default::default() };
        let b = lempert_upper_bound_with(domain, w, z, &opts, out.last())?;
        out.push(b);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_bound_slice_exact_on_ball() {
        let b = BaseDomain::unit_ball(2);
        for t in [0.2, 0.5, 0.8] {
            let v = affine_lower_bound(&b, &TubePoint::real(&[0.0, 0.0]), &TubePoint::real(&[t, 0.0]), 64).unwrap();
            assert!((v - (PI * t / 4.0).tan().atanh()).abs() < 1e-12);
        }
    }

    #[test]
    fn lower_bound_exact_on_box() {
        let b = BaseDomain::interval_product(&[0.0, -1.0], &[2.0, 1.0]).unwrap();
        let w = TubePoint::new(&[0.5, 0.2], &[0.0, 1.0]);
        let z = TubePoint::new(&[1.2, -0.4], &[0.3, 0.2]);
        let exact = strip_distance(0.0, 2.0, w.0[0], z.0[0]).unwrap().max(strip_distance(-1.0, 1.0, w.0[1], z.0[1]).unwrap());
        let v = affine_lower_bound(&b, &w, &z, 16).unwrap();
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn upper_bounds_dominate_the_slice_value() {
        let b = BaseDomain::unit_ball(2);
        let w = TubePoint::real(&[0.0, 0.0]);
        let z = TubePoint::real(&[0.5, 0.0]);
        let exact = (PI / 8.0).tan().atanh();
        let chain = chain_upper_bound(&b, &w, &z).unwrap();
        assert!((chain - exact).abs() < 1e-12);
        let up = lempert_upper_bound(&b, &w, &z, 3).unwrap();
        assert!(up.value >= exact - 1e-9);
        assert!(up.value <= chain + 1e-12);
    }

    #[test]
    fn off_axis_pair_certifies_a_disc() {
        let b = BaseDomain::ellipsoid(&[0.0, 0.0], &[1.0, 0.6]).unwrap();
        let w = TubePoint::new(&[0.2, 0.1], &[0.0, 0.3]);
        let z = TubePoint::new(&[-0.3, 0.2], &[0.5, -0.1]);
        let lad = lempert_ladder(&b, &w, &z, &[1, 2, 4]).unwrap();
        let lo = affine_lower_bound(&b, &w, &z, 64).unwrap();
        for pair in lad.windows(2) {
            assert!(pair[1].value <= pair[0].value);
        }
        for l in &lad {
            assert!(l.value >= lo - 1e-9);
        }
        assert!(!lad[2].fallback);
    }
}
