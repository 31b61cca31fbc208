use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::base_geometry::PolytopeBase;
use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, RVec};
use crate::metrics::half_plane_distance;
use crate::tube::TubePoint;

/// Tolerance on the slack for a constraint to count as active.
pub const ACTIVE_TOL: f64 = 1e-9;

/// Tangent cone `{x + v : ⟨u_i, v⟩ < 0, i active}` of a polytope at a boundary point.
#[derive(Clone, Debug, Serialize)]
pub struct ConeModel {
    pub vertex: Vec<f64>,
    pub active: Vec<usize>,
    pub normals: Vec<Vec<f64>>,
    /// Edge generators `f_j` with `⟨u_i, f_j⟩ = −δ_ij`, present when the cone is simplicial.
    pub generators: Option<Vec<Vec<f64>>>,
    /// Whether the active normals are linearly independent.
    pub independent: bool,
}

pub fn corner_cone(base: &PolytopeBase, x: &RVec) -> Result<ConeModel> {
    let n = base.dim();
    if x.len() != n {
        return Err(Error::Argument("corner point has the wrong dimension".into()));
    }
    let slack = base.slack(x);
    if slack.iter().any(|&s| s < -ACTIVE_TOL) {
        return Err(Error::Argument("corner point lies outside the base".into()));
    }
    let active = base.active_set(x, ACTIVE_TOL);
    if active.is_empty() {
        return Err(Error::Argument("corner point is not on the boundary".into()));
    }
    let normals: Vec<RVec> = active.iter().map(|&i| base.normals()[i].clone()).collect();
    let u = DMatrix::from_fn(normals.len(), n, |i, j| normals[i][j]);
    let independent = numerical_rank(&u, 1e-12) == normals.len();
    let generators = if independent && normals.len() == n {
        let inv = u.try_inverse().ok_or_else(|| Error::numeric("singular active normals", 0.0))?;
        Some((0..n).map(|j| (0..n).map(|i| -inv[(i, j)]).collect()).collect())
    } else {
        None
    };
    Ok(ConeModel {
        vertex: x.iter().cloned().collect(),
        active,
        normals: normals.iter().map(|v| v.iter().cloned().collect()).collect(),
        generators,
        independent,
    })
}

impl ConeModel {
    pub fn dim(&self) -> usize {
        self.vertex.len()
    }

    pub fn contains_direction(&self, v: &RVec) -> bool {
        self.normals.iter().all(|u| dot(u, v.as_slice()) < 0.0)
    }

    /// Membership of the closure, with slack `tol` per constraint.
    pub fn contains_closure(&self, x: &RVec, tol: f64) -> bool {
        let v: Vec<f64> = x.iter().zip(&self.vertex).map(|(a, b)| a - b).collect();
        self.normals.iter().all(|u| dot(u, &v) <= tol)
    }

    /// Half-plane coordinates `⟨−u_i, p − vertex⟩` of a tube point.
    pub fn coordinates(&self, p: &TubePoint) -> Vec<Complex64> {
        self.normals
            .iter()
            .map(|u| {
                -p.as_slice()
                    .iter()
                    .zip(u.iter().zip(&self.vertex))
                    .map(|(c, (ui, xi))| (c - xi) * ui)
                    .sum::<Complex64>()
            })
            .collect()
    }

    /// Kobayashi distance of `T_C`, a product of half-planes with a flat factor.
    pub fn distance(&self, w: &TubePoint, z: &TubePoint) -> Result<f64> {
        if !self.independent {
            return Err(Error::Unsupported("tube over a non-simplicial cone".into()));
        }
        let (a, b) = (self.coordinates(w), self.coordinates(z));
        let mut d: f64 = 0.0;
        for (p, q) in a.into_iter().zip(b) {
            d = d.max(half_plane_distance(p, q)?);
        }
        Ok(d)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
