use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::RVec;

/// Bounded polytope `{x : ⟨u_i, x⟩ < c_i}` with unit normals `u_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeBase {
    normals: Vec<RVec>,
    offsets: Vec<f64>,
    vertices: Vec<RVec>,
}

const FEAS_TOL: f64 = 1e-9;

impl PolytopeBase {
    /// Builds the polytope from half-space rows; normals are rescaled to unit
    /// length (offsets scaled alongside). Fails if the set is empty, has empty
    /// interior or is unbounded.
    pub fn new(normals: Vec<RVec>, offsets: Vec<f64>) -> Result<Self> {
        if normals.is_empty() || normals.len() != offsets.len() {
            return Err(Error::InconsistentDomain("half-space rows and offsets mismatch".into()));
        }
        let n = normals[0].len();
        if n == 0 || normals.iter().any(|u| u.len() != n) {
            return Err(Error::InconsistentDomain("half-space normals of mixed dimension".into()));
        }
        let mut us = Vec::with_capacity(normals.len());
        let mut cs = Vec::with_capacity(normals.len());
        for (u, c) in normals.into_iter().zip(offsets) {
            let norm = u.norm();
            if !(norm > 0.0) || !c.is_finite() {
                return Err(Error::InconsistentDomain("zero or non-finite half-space normal".into()));
            }
            us.push(u / norm);
            cs.push(c / norm);
        }
        let vertices = enumerate_vertices(&us, &cs, n);
        let poly = PolytopeBase {
            normals: us,
            offsets: cs,
            vertices,
        };
        if poly.vertices.len() < n + 1 {
            return Err(Error::InconsistentDomain(
                "polytope is empty, unbounded or lower dimensional".into(),
            ));
        }
        let centre = poly.centroid();
        if poly.slack(&centre).iter().any(|&s| s <= 1e-12) {
            return Err(Error::InconsistentDomain("polytope has empty interior".into()));
        }
        // every recession direction would show up as a missing vertex pair; a
        // cheap check is that each coordinate direction is blocked both ways
        for j in 0..n {
            for sign in [1.0, -1.0] {
                let blocked = poly.normals.iter().any(|u| sign * u[j] > 1e-12);
                if !blocked {
                    return Err(Error::InconsistentDomain("polytope is unbounded".into()));
                }
            }
        }
        Ok(poly)
    }

    /// Axis-aligned box `∏ (lower_i, upper_i)`.
    pub fn interval_product(lower: &[f64], upper: &[f64]) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::InconsistentDomain("interval bounds of mismatched length".into()));
        }
        if lower.iter().zip(upper).any(|(l, u)| !(l < u)) {
            return Err(Error::InconsistentDomain("interval product needs lower < upper".into()));
        }
        let n = lower.len();
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for j in 0..n {
            let mut e = RVec::zeros(n);
            e[j] = 1.0;
            normals.push(e.clone());
            offsets.push(upper[j]);
            normals.push(-e);
            offsets.push(-lower[j]);
        }
        PolytopeBase::new(normals, offsets)
    }

    pub fn dim(&self) -> usize {
        self.normals[0].len()
    }

    pub fn normals(&self) -> &[RVec] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn vertices(&self) -> &[RVec] {
        &self.vertices
    }

    pub fn centroid(&self) -> RVec {
        let mut c = RVec::zeros(self.dim());
        for v in &self.vertices {
            c += v;
        }
        c / self.vertices.len() as f64
    }

    /// `c_i − ⟨u_i, x⟩` for each row; all positive exactly on the interior.
    pub fn slack(&self, x: &RVec) -> Vec<f64> {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(u, c)| c - u.dot(x))
            .collect()
    }

    /// `max_i (⟨u_i, x⟩ − c_i)`: negative inside, zero on the boundary.
    pub fn rho(&self, x: &RVec) -> f64 {
        self.slack(x).into_iter().map(|s| -s).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &RVec) -> bool {
        self.slack(x).iter().all(|&s| s > 0.0)
    }

    /// Indices of constraints active at `x` within `tol`.
    pub fn active_set(&self, x: &RVec, tol: f64) -> Vec<usize> {
        self.slack(x)
            .iter()
            .enumerate()
            .filter(|(_, s)| s.abs() <= tol)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn support_value(&self, u: &RVec) -> f64 {
        self.vertices.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest `t > 0` with `x + t d` on the boundary.
    pub fn ray_exit(&self, x: &RVec, d: &RVec) -> Option<f64> {
        let mut best = f64::INFINITY;
        for (u, c) in self.normals.iter().zip(&self.offsets) {
            let ud = u.dot(d);
            if ud > 1e-300 {
                best = best.min((c - u.dot(x)) / ud);
            }
        }
        best.is_finite().then_some(best)
    }

    /// `(lower, upper)` when every row is `±e_j` and each coordinate is bounded
    /// on both sides by exactly the tightest such rows.
    pub fn as_interval_product(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let n = self.dim();
        let mut lower = vec![f64::NEG_INFINITY; n];
        let mut upper = vec![f64::INFINITY; n];
        for (u, &c) in self.normals.iter().zip(&self.offsets) {
            let nz: Vec<usize> = (0..n).filter(|&j| u[j].abs() > 1e-14).collect();
            if nz.len() != 1 {
                return None;
            }
            let j = nz[0];
            if (u[j].abs() - 1.0).abs() > 1e-14 {
                return None;
            }
            if u[j] > 0.0 {
                upper[j] = upper[j].min(c);
            } else {
                lower[j] = lower[j].max(-c);
            }
        }
        if lower.iter().chain(&upper).all(|v| v.is_finite()) {
            Some((lower, upper))
        } else {
            None
        }
    }

    /// Image under `x ↦ A x + t`.
    pub fn transform_affine(&self, a: &DMatrix<f64>, t: &RVec) -> Result<Self> {
        let a_inv = a
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Argument("affine map is singular".into()))?;
        let normals: Vec<RVec> = self.normals.iter().map(|u| a_inv.transpose() * u).collect();
        let offsets: Vec<f64> = self
            .offsets
            .iter()
            .zip(&normals)
            .map(|(c, u)| c + u.dot(t))
            .collect();
        PolytopeBase::new(normals, offsets)
    }
}

fn enumerate_vertices(us: &[RVec], cs: &[f64], n: usize) -> Vec<RVec> {
    let m = us.len();
    let mut out: Vec<RVec> = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    if m < n {
        return out;
    }
    loop {
        let mut a = DMatrix::<f64>::zeros(n, n);
        let mut rhs = RVec::zeros(n);
        for (r, &i) in idx.iter().enumerate() {
            a.set_row(r, &us[i].transpose());
            rhs[r] = cs[i];
        }
        if let Some(x) = a.lu().solve(&rhs) {
            let feasible = us.iter().zip(cs).all(|(u, c)| u.dot(&x) <= c + FEAS_TOL);
            if feasible && x.iter().all(|v| v.is_finite()) && !out.iter().any(|v| (v - &x).norm() < 1e-9) {
                out.push(x);
            }
        }
        // next combination in lexicographic order
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] < m - n + k {
                idx[k] += 1;
                for j in k + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
