//! Convex bases `Ω ⊂ ℝⁿ`: defining functions, Gauss map, support points and
//! ray/boundary intersections.

mod catalog;
mod polytope;

pub use catalog::{catalog_names, from_catalog, load_domain, parse_domain};
pub use polytope::PolytopeBase;

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, RVec};

/// Default boundary tolerance on `|ρ(x)| / ‖∇ρ(x)‖`.
pub const BOUNDARY_TOL: f64 = 1e-9;

pub type ScalarFn = Arc<dyn Fn(&RVec) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&RVec) -> RVec + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DomainKind {
    Ball,
    Ellipsoid,
    Superellipse,
    CustomSmooth,
    Polytope,
    IntervalProduct,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DomainKind::Ball => "ball",
            DomainKind::Ellipsoid => "ellipsoid",
            DomainKind::Superellipse => "superellipse",
            DomainKind::CustomSmooth => "custom-smooth",
            DomainKind::Polytope => "polytope",
            DomainKind::IntervalProduct => "interval-product",
        };
        f.write_str(s)
    }
}

#[derive(Clone)]
enum Shape {
    Ball { center: RVec, radius: f64 },
    Ellipsoid { center: RVec, q: DMatrix<f64>, q_inv: DMatrix<f64> },
    Superellipse { center: RVec, axes: RVec, p: f64 },
    Custom { rho: ScalarFn, grad: Option<VectorFn> },
    Polytope(PolytopeBase),
}

/// A bounded convex base domain. Immutable once built; cheap to clone.
#[derive(Clone)]
pub struct BaseDomain {
    shape: Shape,
    kind: DomainKind,
    x0: RVec,
    radius: f64,
    label: String,
}

impl fmt::Debug for BaseDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseDomain")
            .field("kind", &self.kind)
            .field("label", &self.label)
            .field("dim", &self.dim())
            .field("x0", &self.x0.as_slice())
            .field("radius", &self.radius)
            .finish()
    }
}

impl BaseDomain {
    pub fn ball(center: &[f64], radius: f64) -> Result<Self> {
        if !(radius > 0.0) || center.is_empty() {
            return Err(Error::InconsistentDomain("ball needs positive radius and n ≥ 1".into()));
        }
        let c = linalg::rvec(center);
        Ok(BaseDomain {
            radius: c.norm() + radius,
            x0: c.clone(),
            shape: Shape::Ball { center: c, radius },
            kind: DomainKind::Ball,
            label: format!("ball{}", center.len()),
        })
    }

    pub fn unit_ball(n: usize) -> Self {
        BaseDomain::ball(&vec![0.0; n], 1.0).expect("unit ball")
    }

    /// Axis-aligned ellipsoid `Σ ((x_i − c_i)/a_i)² < 1`.
    pub fn ellipsoid(center: &[f64], axes: &[f64]) -> Result<Self> {
        if axes.len() != center.len() || axes.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::InconsistentDomain("ellipsoid axes must be positive, one per coordinate".into()));
        }
        let q = DMatrix::from_diagonal(&DVector::from_iterator(axes.len(), axes.iter().map(|a| 1.0 / (a * a))));
        let mut dom = BaseDomain::ellipsoid_matrix(center, q)?;
        dom.label = format!("ellipsoid{}", axes.len());
        Ok(dom)
    }

    /// Ellipsoid `(x − c)ᵀ Q (x − c) < 1` for symmetric positive definite `Q`.
    pub fn ellipsoid_matrix(center: &[f64], q: DMatrix<f64>) -> Result<Self> {
        let n = center.len();
        if q.nrows() != n || q.ncols() != n || n == 0 {
            return Err(Error::InconsistentDomain("ellipsoid matrix has wrong shape".into()));
        }
        let q = (&q + q.transpose()) * 0.5;
        let eig = q.clone().symmetric_eigen();
        let lmin = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(lmin > 0.0) {
            return Err(Error::InconsistentDomain("ellipsoid matrix is not positive definite".into()));
        }
        let q_inv = q.clone().try_inverse().ok_or_else(|| Error::InconsistentDomain("singular ellipsoid matrix".into()))?;
        let c = linalg::rvec(center);
        Ok(BaseDomain {
            radius: c.norm() + 1.0 / lmin.sqrt(),
            x0: c.clone(),
            shape: Shape::Ellipsoid { center: c, q, q_inv },
            kind: DomainKind::Ellipsoid,
            label: format!("ellipsoid{}", n),
        })
    }

    /// `Σ |(x_i − c_i)/a_i|^p < 1` with `p > 1`.
    pub fn superellipse(center: &[f64], axes: &[f64], p: f64) -> Result<Self> {
        if axes.len() != center.len() || axes.iter().any(|a| !(*a > 0.0)) || !(p > 1.0) {
            return Err(Error::InconsistentDomain("superellipse needs positive axes and exponent > 1".into()));
        }
        let c = linalg::rvec(center);
        let a = linalg::rvec(axes);
        Ok(BaseDomain {
            radius: c.norm() + a.norm(),
            x0: c.clone(),
            shape: Shape::Superellipse { center: c, axes: a, p },
            kind: DomainKind::Superellipse,
            label: format!("superellipse{}", axes.len()),
        })
    }

    /// User supplied smooth strictly convex base. `grad` defaults to central
    /// differences of `rho`. `radius` must bound `‖x‖` on the closure.
    pub fn custom(x0: &[f64], radius: f64, rho: ScalarFn, grad: Option<VectorFn>) -> Result<Self> {
        let x0 = linalg::rvec(x0);
        if !(rho(&x0) < 0.0) {
            return Err(Error::InconsistentDomain("reference point is not interior (ρ(x₀) ≥ 0)".into()));
        }
        if !(radius > x0.norm()) {
            return Err(Error::InconsistentDomain("bounding radius smaller than ‖x₀‖".into()));
        }
        let n = x0.len();
        Ok(BaseDomain {
            shape: Shape::Custom { rho, grad },
            kind: DomainKind::CustomSmooth,
            x0,
            radius,
            label: format!("custom{}", n),
        })
    }

    pub fn polytope(base: PolytopeBase) -> Self {
        let kind = if base.as_interval_product().is_some() {
            DomainKind::IntervalProduct
        } else {
            DomainKind::Polytope
        };
        let radius = base.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max);
        BaseDomain {
            x0: base.centroid(),
            radius,
            label: format!("{}{}", kind, base.dim()),
            shape: Shape::Polytope(base),
            kind,
        }
    }

    pub fn interval_product(lower: &[f64], upper: &[f64]) -> Result<Self> {
        Ok(BaseDomain::polytope(PolytopeBase::interval_product(lower, upper)?))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    /// Interior reference point `x₀`.
    pub fn x0(&self) -> &RVec {
        &self.x0
    }

    /// `R` with `‖x‖ ≤ R` on the closure.
    pub fn bounding_radius(&self) -> f64 {
        self.radius
    }

    pub fn is_smooth(&self) -> bool {
        !matches!(self.shape, Shape::Polytope(_))
    }

    pub fn as_polytope(&self) -> Option<&PolytopeBase> {
        match &self.shape {
            Shape::Polytope(p) => Some(p),
            _ => None,
        }
    }

    fn check_dim(&self, x: &RVec) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Argument(format!("expected a point of dimension {}, got {}", self.dim(), x.len())));
        }
        Ok(())
    }

    pub fn rho(&self, x: &RVec) -> f64 {
        match &self.shape {
            Shape::Ball { center, radius } => 0.5 * ((x - center).norm_squared() / (radius * radius) - 1.0),
            Shape::Ellipsoid { center, q, .. } => {
                let y = x - center;
                0.5 * (y.dot(&(q * &y)) - 1.0)
            }
            Shape::Superellipse { center, axes, p } => {
                let s: f64 = x.iter().zip(center.iter()).zip(axes.iter()).map(|((xi, ci), ai)| ((xi - ci) / ai).abs().powf(*p)).sum();
                (s - 1.0) / p
            }
            Shape::Custom { rho, .. } => rho(x),
            Shape::Polytope(poly) => poly.rho(x),
        }
    }

    pub fn grad_rho(&self, x: &RVec) -> RVec {
        match &self.shape {
            Shape::Ball { center, radius } => (x - center) / (radius * radius),
            Shape::Ellipsoid { center, q, .. } => q * (x - center),
            Shape::Superellipse { center, axes, p } => RVec::from_iterator(
                x.len(),
                (0..x.len()).map(|i| {
                    let y = (x[i] - center[i]) / axes[i];
                    y.signum() * y.abs().powf(p - 1.0) / axes[i]
                }),
            ),
            Shape::Custom { rho, grad } => match grad {
                Some(g) => g(x),
                None => fd_gradient(rho.as_ref(), x),
            },
            Shape::Polytope(poly) => {
                let slack = poly.slack(x);
                let (i, _) = slack
                    .iter()
                    .enumerate()
                    .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
                poly.normals()[i].clone()
            }
        }
    }

    pub fn contains(&self, x: &RVec) -> bool {
        x.len() == self.dim() && self.rho(x) < 0.0
    }

    /// `|ρ(x)| / ‖∇ρ(x)‖`, the first-order distance to the boundary.
    pub fn boundary_residual(&self, x: &RVec) -> f64 {
        let r = self.rho(x).abs();
        let g = self.grad_rho(x).norm();
        if g > 0.0 {
            r / g
        } else {
            f64::INFINITY
        }
    }

    pub fn on_boundary(&self, x: &RVec) -> bool {
        self.boundary_residual(x) <= BOUNDARY_TOL
    }

    /// Outer unit normal `∇ρ(x)/‖∇ρ(x)‖` at a boundary point.
    pub fn gauss_map(&self, x: &RVec) -> Result<RVec> {
        self.check_dim(x)?;
        let res = self.boundary_residual(x);
        if !(res <= BOUNDARY_TOL) {
            return Err(Error::Domain(format!("point is not on the boundary (|ρ|/‖∇ρ‖ = {:.3e})", res)));
        }
        if let Shape::Polytope(poly) = &self.shape {
            let act = poly.active_set(x, BOUNDARY_TOL);
            if act.len() != 1 {
                return Err(Error::Domain("boundary point is not in the relative interior of a facet".into()));
            }
            return Ok(poly.normals()[act[0]].clone());
        }
        linalg::unit(&self.grad_rho(x)).ok_or_else(|| Error::Domain("vanishing gradient on the boundary".into()))
    }

    /// The boundary point maximising `⟨x, v⟩`, i.e. the inverse Gauss map at `v/‖v‖`.
    pub fn support_point(&self, v: &RVec) -> Result<RVec> {
        self.check_dim(v)?;
        let vn = v.norm();
        if !(vn > 0.0) || !vn.is_finite() {
            return Err(Error::Argument("support direction must be a nonzero finite vector".into()));
        }
        let u = v / vn;
        match &self.shape {
            Shape::Ball { center, radius } => Ok(center + u * *radius),
            Shape::Ellipsoid { center, q_inv, .. } => {
                let w = q_inv * &u;
                Ok(center + &w / u.dot(&w).sqrt())
            }
            Shape::Superellipse { center, axes, p } => {
                let q = p / (p - 1.0);
                let w: Vec<f64> = (0..u.len()).map(|i| axes[i] * u[i]).collect();
                let wmax = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                let norm_q = wmax * w.iter().map(|x| (x.abs() / wmax).powf(q)).sum::<f64>().powf(1.0 / q);
                Ok(RVec::from_iterator(
                    u.len(),
                    (0..u.len()).map(|i| center[i] + axes[i] * w[i].signum() * (w[i].abs() / norm_q).powf(q - 1.0)),
                ))
            }
            Shape::Custom { .. } => self.support_point_newton(&u),
            Shape::Polytope(_) => Err(Error::Unsupported("support point of a polytope is not unique in general".into())),
        }
    }

    /// Support function `h(u) = sup_{x∈Ω} ⟨x, u⟩`.
    pub fn support_value(&self, u: &RVec) -> Result<f64> {
        self.check_dim(u)?;
        match &self.shape {
            Shape::Ball { center, radius } => Ok(center.dot(u) + radius * u.norm()),
            Shape::Ellipsoid { center, q_inv, .. } => Ok(center.dot(u) + u.dot(&(q_inv * u)).sqrt()),
            Shape::Polytope(poly) => Ok(poly.support_value(u)),
            _ => {
                if u.norm() == 0.0 {
                    return Ok(0.0);
                }
                Ok(self.support_point(u)?.dot(u))
            }
        }
    }

    /// Smallest `t > 0` with `x + t·d` on the boundary.
    pub fn boundary_intersection(&self, x: &RVec, d: &RVec) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(d)?;
        if !(self.rho(x) < 0.0) {
            return Err(Error::Argument("ray origin is not interior".into()));
        }
        let dn = d.norm();
        if !(dn > 0.0) {
            return Err(Error::Argument("ray direction must be nonzero".into()));
        }
        let d = d / dn;
        let t = match &self.shape {
            Shape::Ball { center, radius } => {
                let y = x - center;
                let b = y.dot(&d);
                let c0 = y.norm_squared() - radius * radius;
                quadratic_exit(1.0, b, c0)
            }
            Shape::Ellipsoid { center, q, .. } => {
                let y = x - center;
                let qd = q * &d;
                quadratic_exit(d.dot(&qd), y.dot(&qd), y.dot(&(q * &y)) - 1.0)
            }
            Shape::Polytope(poly) => poly
                .ray_exit(x, &d)
                .ok_or_else(|| Error::InconsistentDomain("ray never leaves the polytope".into()))?,
            _ => self.bisect_exit(x, &d)?,
        };
        Ok(t / dn)
    }

    fn bisect_exit(&self, x: &RVec, d: &RVec) -> Result<f64> {
        let limit = 2.0 * self.radius + x.norm();
        let mut lo = 0.0;
        let mut hi = f64::NAN;
        // bracket: step outward until ρ changes sign
        let mut step = 1e-3 * self.radius.max(1e-12);
        let mut t = step;
        while t <= limit * (1.0 + 1e-12) {
            if self.rho(&(x + d * t)) >= 0.0 {
                hi = t;
                break;
            }
            lo = t;
            step *= 2.0;
            t = (t + step).min(limit.max(t + 1e-300));
            if t == lo {
                break;
            }
        }
        if !hi.is_finite() {
            return Err(Error::InconsistentDomain(format!("no boundary crossing within 2R = {}", 2.0 * self.radius)));
        }
        while hi - lo > 1e-12 * (1.0 + hi) {
            let mid = 0.5 * (lo + hi);
            if self.rho(&(x + d * mid)) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut t = 0.5 * (lo + hi);
        let p = x + d * t;
        let slope = self.grad_rho(&p).dot(d);
        if slope > 0.0 {
            let tn = t - self.rho(&p) / slope;
            if tn > lo - 1e-12 && tn < hi + 1e-12 {
                t = tn;
            }
        }
        Ok(t)
    }

    /// Minkowski gauge about `x₀`: `Ω = {gauge < 1}`.
    pub fn gauge(&self, x: &RVec) -> f64 {
        match &self.shape {
            Shape::Ball { center, radius } => (x - center).norm() / radius,
            Shape::Ellipsoid { center, q, .. } => {
                let y = x - center;
                y.dot(&(q * &y)).max(0.0).sqrt()
            }
            Shape::Superellipse { center, axes, p } => {
                let ys: Vec<f64> = (0..x.len()).map(|i| ((x[i] - center[i]) / axes[i]).abs()).collect();
                let m = ys.iter().cloned().fold(0.0, f64::max);
                if m == 0.0 {
                    0.0
                } else {
                    m * ys.iter().map(|y| (y / m).powf(*p)).sum::<f64>().powf(1.0 / p)
                }
            }
            Shape::Polytope(poly) => {
                let y = x - &self.x0;
                poly.normals()
                    .iter()
                    .zip(poly.offsets())
                    .map(|(u, c)| u.dot(&y) / (c - u.dot(&self.x0)))
                    .fold(0.0, f64::max)
            }
            Shape::Custom { .. } => {
                let y = x - &self.x0;
                let r = y.norm();
                if r == 0.0 {
                    return 0.0;
                }
                match self.boundary_intersection(&self.x0, &(&y / r)) {
                    Ok(t) => r / t,
                    Err(_) => f64::INFINITY,
                }
            }
        }
    }

    pub fn gauge_grad(&self, x: &RVec) -> RVec {
        match &self.shape {
            Shape::Ball { center, radius } => {
                let y = x - center;
                let r = y.norm();
                if r == 0.0 {
                    RVec::zeros(x.len())
                } else {
                    y / (r * radius)
                }
            }
            Shape::Ellipsoid { center, q, .. } => {
                let y = x - center;
                let qy = q * &y;
                let g = y.dot(&qy).max(0.0).sqrt();
                if g == 0.0 {
                    RVec::zeros(x.len())
                } else {
                    qy / g
                }
            }
            Shape::Superellipse { center, axes, p } => {
                let g = self.gauge(x);
                if g == 0.0 {
                    return RVec::zeros(x.len());
                }
                RVec::from_iterator(
                    x.len(),
                    (0..x.len()).map(|i| {
                        let y = (x[i] - center[i]) / axes[i];
                        y.signum() * (y.abs() / g).powf(p - 1.0) / axes[i]
                    }),
                )
            }
            Shape::Polytope(poly) => {
                let y = x - &self.x0;
                let mut best = (f64::NEG_INFINITY, RVec::zeros(x.len()));
                for (u, c) in poly.normals().iter().zip(poly.offsets()) {
                    let scale = c - u.dot(&self.x0);
                    let v = u.dot(&y) / scale;
                    if v > best.0 {
                        best = (v, u / scale);
                    }
                }
                best.1
            }
            Shape::Custom { .. } => fd_gradient(&|p: &RVec| self.gauge(p), x),
        }
    }

    /// Image of the base under `x ↦ A x + t`.
    pub fn transform_affine(&self, a: &DMatrix<f64>, t: &RVec) -> Result<BaseDomain> {
        let n = self.dim();
        if a.nrows() != n || a.ncols() != n || t.len() != n {
            return Err(Error::Argument("affine map has the wrong shape".into()));
        }
        let a_inv = a.clone().try_inverse().ok_or_else(|| Error::Argument("affine map is singular".into()))?;
        let label = format!("{}-affine", self.label);
        match &self.shape {
            Shape::Ball { center, radius } => {
                let q = a_inv.transpose() * &a_inv / (radius * radius);
                let c = a * center + t;
                Ok(BaseDomain::ellipsoid_matrix(c.as_slice(), q)?.with_label(label))
            }
            Shape::Ellipsoid { center, q, .. } => {
                let q2 = a_inv.transpose() * q * &a_inv;
                let c = a * center + t;
                Ok(BaseDomain::ellipsoid_matrix(c.as_slice(), q2)?.with_label(label))
            }
            Shape::Polytope(poly) => Ok(BaseDomain::polytope(poly.transform_affine(a, t)?).with_label(label)),
            _ => {
                let inner = self.clone();
                let inner_g = self.clone();
                let (ai, ai2, t1, t2) = (a_inv.clone(), a_inv.clone(), t.clone(), t.clone());
                let rho: ScalarFn = Arc::new(move |x: &RVec| inner.rho(&(&ai * (x - &t1))));
                let grad: VectorFn = Arc::new(move |x: &RVec| ai2.transpose() * inner_g.grad_rho(&(&ai2 * (x - &t2))));
                let x0 = a * &self.x0 + t;
                let radius = t.norm() + a.norm() * self.radius * (1.0 + 1e-12) + 1e-12;
                Ok(BaseDomain::custom(x0.as_slice(), radius.max(x0.norm() * (1.0 + 1e-9) + 1e-12), rho, Some(grad))?.with_label(label))
            }
        }
    }

    /// Random interior point on a ray from `x₀`, at most `shrink` of the way
    /// to the boundary.
    pub fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R, shrink: f64) -> RVec {
        let d = random_unit(rng, self.dim());
        let t = self.boundary_intersection(&self.x0, &d).expect("x0 is interior");
        let s: f64 = rng.gen::<f64>().powf(1.0 / self.dim() as f64) * shrink;
        &self.x0 + d * (s * t)
    }

    /// Random boundary point (radial projection from `x₀`).
    pub fn sample_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> RVec {
        let d = random_unit(rng, self.dim());
        let t = self.boundary_intersection(&self.x0, &d).expect("x0 is interior");
        &self.x0 + d * t
    }

    /// Newton on the Lagrange system `∇ρ(x) = μ u, ρ(x) = 0`, continued along
    /// the great circle from the normal at the radial hit when it stalls.
    fn support_point_newton(&self, u: &RVec) -> Result<RVec> {
        let t = self.boundary_intersection(&self.x0, u)?;
        let start = &self.x0 + u * t;
        let g = self.grad_rho(&start);
        let mu0 = g.norm();
        if let Some(x) = self.lagrange_newton(u, start.clone(), u.dot(&g).max(mu0 * 1e-3)) {
            return Ok(x);
        }
        let u0 = linalg::unit(&g).ok_or_else(|| Error::numeric("vanishing gradient at radial hit", f64::INFINITY))?;
        let mut tau = 0.0;
        let mut dt: f64 = 0.125;
        let mut x = start;
        let mut mu = mu0;
        while tau < 1.0 {
            let next = (tau + dt).min(1.0);
            let dir = slerp(&u0, u, next);
            match self.lagrange_newton(&dir, x.clone(), mu) {
                Some(xn) => {
                    mu = self.grad_rho(&xn).norm();
                    x = xn;
                    tau = next;
                    dt = (dt * 1.5).min(0.25);
                }
                None => {
                    dt *= 0.5;
                    if dt < 1e-6 {
                        let res = self.rho(&x).abs();
                        return Err(Error::numeric("support point homotopy stalled", res));
                    }
                }
            }
        }
        Ok(x)
    }

    fn lagrange_newton(&self, u: &RVec, mut x: RVec, mut mu: f64) -> Option<RVec> {
        let n = self.dim();
        let scale = self.radius.max(1e-12);
        for _ in 0..60 {
            let g = self.grad_rho(&x);
            let r = self.rho(&x);
            let gn = g.norm();
            if gn > 0.0 && r.abs() / gn <= 1e-14 * scale && 1.0 - g.dot(u) / gn <= 1e-15 {
                return (g.dot(u) > 0.0).then_some(x);
            }
            let h = fd_hessian(self, &x);
            let mut jac = DMatrix::<f64>::zeros(n + 1, n + 1);
            jac.view_mut((0, 0), (n, n)).copy_from(&h);
            for i in 0..n {
                jac[(i, n)] = -u[i];
                jac[(n, i)] = g[i];
            }
            let mut rhs = DVector::<f64>::zeros(n + 1);
            for i in 0..n {
                rhs[i] = -(g[i] - mu * u[i]);
            }
            rhs[n] = -r;
            let step = jac.lu().solve(&rhs)?;
            let dx = step.rows(0, n).into_owned();
            let lim = 0.25 * scale;
            let fac = if dx.norm() > lim { lim / dx.norm() } else { 1.0 };
            x += dx * fac;
            mu += step[n] * fac;
            if !x.iter().all(|v| v.is_finite()) || x.norm() > 4.0 * self.radius + 1.0 {
                return None;
            }
        }
        let g = self.grad_rho(&x);
        let gn = g.norm();
        let ok = gn > 0.0 && self.rho(&x).abs() / gn <= 1e-12 * scale && 1.0 - g.dot(u) / gn <= 1e-13;
        ok.then_some(x)
    }
}

fn quadratic_exit(a: f64, b: f64, c: f64) -> f64 {
    // largest root of a t² + 2 b t + c with c < 0
    let disc = (b * b - a * c).max(0.0).sqrt();
    if b > 0.0 {
        -c / (b + disc)
    } else {
        (disc - b) / a
    }
}

fn slerp(a: &RVec, b: &RVec, t: f64) -> RVec {
    let v = a * (1.0 - t) + b * t;
    linalg::unit(&v).unwrap_or_else(|| b.clone())
}

pub(crate) fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RVec {
    loop {
        let v = RVec::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
        if let Some(u) = linalg::unit(&v) {
            return u;
        }
    }
}

fn fd_gradient(f: &dyn Fn(&RVec) -> f64, x: &RVec) -> RVec {
    let h = 1e-6 * (1.0 + x.amax());
    let mut g = RVec::zeros(x.len());
    let mut xp = x.clone();
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        let fp = f(&xp);
        xp[i] = x[i] - h;
        let fm = f(&xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

fn fd_hessian(dom: &BaseDomain, x: &RVec) -> DMatrix<f64> {
    let n = x.len();
    let h = 1e-5 * (1.0 + x.amax());
    let mut m = DMatrix::<f64>::zeros(n, n);
    let mut xp = x.clone();
    for j in 0..n {
        xp[j] = x[j] + h;
        let gp = dom.grad_rho(&xp);
        xp[j] = x[j] - h;
        let gm = dom.grad_rho(&xp);
        xp[j] = x[j];
        m.set_column(j, &((gp - gm) / (2.0 * h)));
    }
    (&m + m.transpose()) * 0.5
}
