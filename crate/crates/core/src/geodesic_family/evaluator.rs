use std::f64::consts::TAU;

use num_complex::Complex64;

use super::params::{self, GeodesicParams};
use crate::base_geometry::BaseDomain;
use crate::error::{Error, Result};
use crate::linalg::{self, CVec, RVec};
use crate::quadrature::AdaptiveGk;

/// Largest modulus at which interior evaluation is offered by default.
pub const R_MAX: f64 = 0.999;

/// Something holomorphic on the disc with values in `ℂⁿ`.
pub trait DiscMap {
    fn dim(&self) -> usize;
    fn eval(&self, lambda: Complex64) -> Result<CVec>;
}

/// The complex geodesic `f(λ) = (1/2π) ∫ (ξ+λ)/(ξ−λ) g(ξ) dt + i Im f(0)`
/// with boundary data `g = support_point(F̃)`, evaluated by adaptive
/// Gauss–Kronrod quadrature with breakpoints at the (near-)singular angles of
/// `F̃` and around `arg λ`.
#[derive(Clone, Debug)]
pub struct GeodesicMap {
    domain: BaseDomain,
    params: GeodesicParams,
    // (angle, ‖F̃‖, ‖F̃'‖) at local minima of ‖F̃‖ that are small but nonzero
    near: Vec<(f64, f64, f64)>,
    tol: f64,
    inner: Option<Box<Precomposed>>,
}

// f = base ∘ m + i·shift with m(μ) = (μ + α)/(1 + αμ)
#[derive(Clone, Debug)]
struct Precomposed {
    base: GeodesicMap,
    alpha: f64,
    shift: RVec,
}

impl GeodesicMap {
    pub fn new(domain: &BaseDomain, params: GeodesicParams) -> Result<Self> {
        if !domain.is_smooth() {
            return Err(Error::Unsupported("geodesics are built only over smooth strictly convex bases".into()));
        }
        if domain.dim() != params.dim() {
            return Err(Error::Argument(format!(
                "parameters of dimension {} for a base of dimension {}",
                params.dim(),
                domain.dim()
            )));
        }
        let near = params::norm_minima(params.a(), params.b())
            .into_iter()
            .filter(|(_, v, d)| *v > params::SINGULAR_TOL && *d > 0.0 && v / d < 0.05)
            .collect();
        Ok(GeodesicMap {
            domain: domain.clone(),
            params,
            near,
            tol: 1e-11,
            inner: None,
        })
    }

    /// `f ∘ m` for `m(μ) = (μ + α)/(1 + αμ)`, renormalized to `Im f(0) = im_f0`.
    /// Values are computed through `f` itself, which stays cheap when `m`
    /// squeezes most of the circle into a short arc.
    pub fn precomposed(base: GeodesicMap, alpha: f64, im_f0: RVec) -> Result<Self> {
        let params = base.params.precompose(alpha, im_f0.clone())?;
        let at = base.eval(Complex64::new(alpha, 0.0))?;
        let shift = RVec::from_iterator(im_f0.len(), im_f0.iter().zip(at.iter()).map(|(m, v)| m - v.im));
        let mut out = GeodesicMap::new(&base.domain, params)?;
        out.tol = base.tol;
        out.inner = Some(Box::new(Precomposed { base, alpha, shift }));
        Ok(out)
    }

    /// Absolute accuracy requested from the quadrature on each value of `f`.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        if let Some(inner) = self.inner.as_mut() {
            inner.base.tol = tol;
        }
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn domain(&self) -> &BaseDomain {
        &self.domain
    }

    pub fn params(&self) -> &GeodesicParams {
        &self.params
    }

    /// Boundary value `g(e^{it})`; `None` at a singular angle.
    pub fn boundary_value(&self, t: f64) -> Result<Option<RVec>> {
        let s = self.params.singular_points();
        if s.iter().any(|&ts| params::angle_dist(ts, t) < 1e-14) {
            return Ok(None);
        }
        self.g(t).map(Some)
    }

    /// One-sided boundary limits `(x₊, x₋)` at a singular angle.
    pub fn one_sided_limits(&self, ts: f64) -> Result<(RVec, RVec)> {
        let (up, down) = self.params.one_sided_directions(ts);
        Ok((self.domain.support_point(&up)?, self.domain.support_point(&down)?))
    }

    fn g(&self, t: f64) -> Result<RVec> {
        let ft = self.params.f_tilde(t);
        let dir = if ft.norm() > 1e-13 {
            ft
        } else {
            // numerically on a zero of F̃: use the one-sided limit of the side t lies on
            let s = self.params.singular_points();
            let ts = s
                .iter()
                .copied()
                .min_by(|x, y| params::angle_dist(*x, t).total_cmp(&params::angle_dist(*y, t)))
                .unwrap_or(t);
            let side = ((t - ts + TAU / 2.0).rem_euclid(TAU) - TAU / 2.0).signum();
            self.params.f_tilde_prime(ts) * side
        };
        self.domain
            .support_point(&dir)
            .map_err(|e| match e {
                Error::Numeric { message, residual } => Error::numeric(format!("{} at angle {:.6}", message, t), residual),
                other => other,
            })
    }

    // breakpoints in [t0, t0 + 2π], arg λ included with the same rounding as `wrap`
    fn breakpoints(&self, t0: f64, lambdas: &[Complex64]) -> Vec<f64> {
        let mut pts: Vec<f64> = self.params.singular_points().to_vec();
        for &(tm, v, d) in &self.near {
            let w = v / d;
            pts.push(tm);
            for k in [1.0, 4.0, 16.0, 64.0, 256.0] {
                if k * w < 0.5 {
                    pts.push(tm + k * w);
                    pts.push(tm - k * w);
                }
            }
        }
        for lam in lambdas {
            let r = lam.norm();
            if r > 0.5 {
                let th = lam.arg();
                pts.push(th);
                for k in [1.0, 4.0, 16.0, 64.0] {
                    let w = k * (1.0 - r);
                    if w < 0.5 {
                        pts.push(th + w);
                        pts.push(th - w);
                    }
                }
            }
        }
        let mut out: Vec<f64> = pts
            .into_iter()
            .map(|t| wrap(t0, t))
            .filter(|t| *t > t0 && *t < t0 + TAU)
            .collect();
        out.push(t0);
        out.push(t0 + TAU);
        out.sort_by(|x, y| x.total_cmp(y));
        out.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
        out
    }

    /// Values of `f` at several points with one adaptive pass; returns the
    /// values and the quadrature error estimate (max-norm, on `f`).
    pub fn eval_many_with_error(&self, lambdas: &[Complex64]) -> Result<(Vec<CVec>, f64)> {
        let n = self.params.dim();
        for lam in lambdas {
            if !(lam.norm() < 1.0) {
                return Err(Error::Argument(format!("|λ| = {} is not inside the unit disc", lam.norm())));
            }
        }
        if let Some(inner) = &self.inner {
            let a = inner.alpha;
            let moved: Vec<Complex64> = lambdas.iter().map(|l| (l + a) / (1.0 + a * l)).collect();
            let (vals, err) = inner.base.eval_many_with_error(&moved)?;
            let shifted = vals
                .into_iter()
                .map(|v| CVec::from_iterator(n, v.iter().zip(inner.shift.iter()).map(|(c, m)| c + Complex64::new(0.0, *m))))
                .collect();
            return Ok((shifted, err));
        }
        let t0 = params::window_start(self.params.singular_points());
        let polar: Vec<(f64, f64)> = lambdas.iter().map(|l| (l.norm(), wrap(t0, l.arg()))).collect();
        let breaks = self.breakpoints(t0, lambdas);
        let dim = 2 * n * lambdas.len();
        let quad = AdaptiveGk::new(self.tol * TAU);
        let res = quad.integrate_anchored(dim, &breaks, |anchor, u, out| {
            let g = self.g(anchor + u)?;
            for (k, &(r, th)) in polar.iter().enumerate() {
                // (θ − anchor) is exact when θ is the anchor itself
                let (p, q) = kernel_at(r, (th - anchor) - u);
                for i in 0..n {
                    out[2 * n * k + i] = p * g[i];
                    out[2 * n * k + n + i] = q * g[i];
                }
            }
            Ok(())
        })?;
        let m = self.params.im_f0();
        let vals = (0..lambdas.len())
            .map(|k| {
                CVec::from_iterator(
                    n,
                    (0..n).map(|i| Complex64::new(res.value[2 * n * k + i] / TAU, res.value[2 * n * k + n + i] / TAU + m[i])),
                )
            })
            .collect();
        let err = res.error / TAU;
        if err > self.tol * 10.0 {
            return Err(Error::numeric("Schwarz integral above tolerance", err));
        }
        Ok((vals, err))
    }

    pub fn eval_many(&self, lambdas: &[Complex64]) -> Result<Vec<CVec>> {
        Ok(self.eval_many_with_error(lambdas)?.0)
    }

    pub fn re_eval(&self, lambda: Complex64) -> Result<RVec> {
        Ok(linalg::re(&self.eval(lambda)?))
    }
}

impl DiscMap for GeodesicMap {
    fn dim(&self) -> usize {
        self.params.dim()
    }

    fn eval(&self, lambda: Complex64) -> Result<CVec> {
        Ok(self.eval_many_with_error(&[lambda])?.0.remove(0))
    }
}

fn wrap(t0: f64, t: f64) -> f64 {
    t0 + (t - t0).rem_euclid(TAU)
}

/// Real and imaginary parts of `(e^{it}+λ)/(e^{it}−λ)` for `λ = r e^{iθ}`.
pub(crate) fn schwarz_kernel(r: f64, th: f64, t: f64) -> (f64, f64) {
    kernel_at(r, th - t)
}

/// The kernel as a function of `d = arg λ − t`.
fn kernel_at(r: f64, d: f64) -> (f64, f64) {
    if r == 0.0 {
        return (1.0, 0.0);
    }
    let s = (0.5 * d).sin();
    let den = (1.0 - r) * (1.0 - r) + 4.0 * r * s * s;
    ((1.0 - r) * (1.0 + r) / den, 2.0 * r * d.sin() / den)
}

/// `(f(λ) + conj f(λ̄)) / 2`: the real-coefficient part of a disc map, real on
/// `(−1, 1)`.
#[derive(Clone, Debug)]
pub struct Symmetrized<M>(pub M);

impl<M: DiscMap> DiscMap for Symmetrized<M> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, lambda: Complex64) -> Result<CVec> {
        let f = self.0.eval(lambda)?;
        let g = self.0.eval(lambda.conj())?;
        Ok((f + g.map(|c| c.conj())) * Complex64::new(0.5, 0.0))
    }
}

/// A disc map given by a closure, for analytic test data.
pub struct FnDisc<F> {
    n: usize,
    f: F,
}

impl<F: Fn(Complex64) -> CVec> FnDisc<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnDisc { n, f }
    }
}

impl<F: Fn(Complex64) -> CVec> DiscMap for FnDisc<F> {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, lambda: Complex64) -> Result<CVec> {
        Ok((self.f)(lambda))
    }
}
