use std::f64::consts::TAU;

use num_complex::Complex64;

use super::evaluator::{schwarz_kernel, DiscMap, GeodesicMap, R_MAX};
use super::params::{angle_dist, FCaseLabel, GeodesicParams};
use crate::base_geometry::BaseDomain;
use crate::error::{Error, Result};
use crate::linalg::{CVec, RVec};

/// Sampled boundary data `g(e^{itⱼ})`, `tⱼ = 2πj/M`.
#[derive(Clone, Debug)]
pub struct BoundaryProfile {
    angles: Vec<f64>,
    values: Vec<Option<RVec>>,
    singular: Vec<f64>,
    label: Option<FCaseLabel>,
    source: Option<GeodesicMap>,
}

/// Trapezoid accuracy demanded before falling back to adaptive refinement.
const PROFILE_TOL: f64 = 1e-8;

pub fn boundary_profile(domain: &BaseDomain, params: &GeodesicParams, m: usize) -> Result<BoundaryProfile> {
    BoundaryProfile::from_geodesic(&GeodesicMap::new(domain, params.clone())?, m)
}

impl BoundaryProfile {
    pub fn from_geodesic(map: &GeodesicMap, m: usize) -> Result<Self> {
        if m < 64 {
            return Err(Error::Argument(format!("profile grid M = {} is below 64", m)));
        }
        let angles: Vec<f64> = (0..m).map(|j| TAU * j as f64 / m as f64).collect();
        let values = angles.iter().map(|&t| map.boundary_value(t)).collect::<Result<Vec<_>>>()?;
        let params = map.params();
        Ok(BoundaryProfile {
            angles,
            values,
            singular: params.singular_points().to_vec(),
            label: Some(params.case_label()),
            source: Some(map.clone()),
        })
    }

    /// Profile from raw samples on the uniform grid (no geodesic behind it).
    pub fn from_values(values: Vec<RVec>) -> Result<Self> {
        let m = values.len();
        if m < 8 || m % 2 == 1 {
            return Err(Error::Argument("raw profiles need an even number (≥ 8) of samples".into()));
        }
        Ok(BoundaryProfile {
            angles: (0..m).map(|j| TAU * j as f64 / m as f64).collect(),
            values: values.into_iter().map(Some).collect(),
            singular: Vec::new(),
            label: None,
            source: None,
        })
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn values(&self) -> &[Option<RVec>] {
        &self.values
    }

    pub fn singular_points(&self) -> &[f64] {
        &self.singular
    }

    pub fn case_label(&self) -> Option<FCaseLabel> {
        self.label
    }

    pub fn geodesic(&self) -> Option<&GeodesicMap> {
        self.source.as_ref()
    }

    /// Replaces the stored samples; used to build corrupted profiles in checks.
    pub fn with_values(&self, values: Vec<Option<RVec>>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(Error::Argument("replacement profile has the wrong length".into()));
        }
        Ok(BoundaryProfile { values, ..self.clone() })
    }

    /// Max distance between two profiles on the common grid, skipping angles
    /// within `mask` of a singular point of either profile.
    pub fn distance(&self, other: &BoundaryProfile, mask: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, t) in self.angles.iter().enumerate() {
            let near = self.singular.iter().chain(&other.singular).any(|&s| angle_dist(s, *t) < mask);
            if near {
                continue;
            }
            if let (Some(x), Some(y)) = (&self.values[j], other.values.get(j).and_then(|v| v.as_ref())) {
                worst = worst.max((x - y).norm());
            }
        }
        worst
    }

    fn trapezoid(&self, lambda: Complex64, stride: usize) -> Option<CVec> {
        let n = self.values.iter().flatten().next()?.len();
        let (r, th) = (lambda.norm(), lambda.arg());
        let mut acc = CVec::zeros(n);
        let mut count = 0usize;
        for j in (0..self.len()).step_by(stride) {
            let v = match &self.values[j] {
                Some(v) => v.clone(),
                None => {
                    let map = self.source.as_ref()?;
                    let ts = self.angles[j];
                    let (xp, xm) = map.one_sided_limits(ts).ok()?;
                    (xp + xm) * 0.5
                }
            };
            let (p, q) = schwarz_kernel(r, th, self.angles[j]);
            for i in 0..n {
                acc[i] += Complex64::new(p * v[i], q * v[i]);
            }
            count += 1;
        }
        Some(acc / Complex64::new(count as f64, 0.0))
    }

    /// Schwarz integral of the profile at `|λ| ≤ 0.999` by the periodic
    /// trapezoid rule; when the half-grid comparison misses `1e-8` the value is
    /// recomputed adaptively from the underlying geodesic, if there is one.
    pub fn schwarz_integral(&self, im_f0: &RVec, lambda: Complex64) -> Result<CVec> {
        if lambda.norm() > R_MAX {
            return Err(Error::Argument(format!("|λ| = {} exceeds r_max = {}", lambda.norm(), R_MAX)));
        }
        let fine = self.trapezoid(lambda, 1).ok_or_else(|| Error::Argument("empty profile".into()))?;
        if im_f0.len() != fine.len() {
            return Err(Error::Argument("Im f(0) has the wrong dimension".into()));
        }
        let coarse = self.trapezoid(lambda, 2).expect("nonempty");
        let est = (&fine - &coarse).iter().map(|c| c.norm()).fold(0.0, f64::max);
        let offset = CVec::from_iterator(im_f0.len(), im_f0.iter().map(|m| Complex64::new(0.0, *m)));
        if est <= PROFILE_TOL && self.singular.is_empty() {
            return Ok(fine + offset);
        }
        match &self.source {
            Some(map) => {
                let v = map.eval(lambda)?;
                let m0 = map.params().im_f0();
                Ok(CVec::from_iterator(
                    v.len(),
                    v.iter().enumerate().map(|(i, c)| Complex64::new(c.re, c.im - m0[i] + im_f0[i])),
                ))
            }
            None => Err(Error::numeric("trapezoid estimate above tolerance for raw profile", est)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rvec;

    #[test]
    fn constant_profile_is_constant_map() {
        let c = rvec(&[0.2, -0.1]);
        let prof = BoundaryProfile::from_values(vec![c.clone(); 256]).unwrap();
        let m = rvec(&[1.0, 2.0]);
        for lam in [Complex64::new(0.0, 0.0), Complex64::new(0.3, -0.5)] {
            let f = prof.schwarz_integral(&m, lam).unwrap();
            for i in 0..2 {
                assert!((f[i] - Complex64::new(c[i], m[i])).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn cosine_profile_is_linear_map() {
        let v = rvec(&[1.0, -2.0]);
        let vals = (0..256).map(|j| &v * (TAU * j as f64 / 256.0).cos()).collect();
        let prof = BoundaryProfile::from_values(vals).unwrap();
        let lam = Complex64::new(0.4, 0.5);
        let f = prof.schwarz_integral(&rvec(&[0.0, 0.0]), lam).unwrap();
        assert!((f[0] - lam).norm() < 1e-13 && (f[1] + lam * 2.0).norm() < 1e-13);
    }

    #[test]
    fn raw_profile_near_rim_reports_error() {
        let vals = (0..64).map(|j| rvec(&[(TAU * j as f64 / 64.0).cos()])).collect();
        let prof = BoundaryProfile::from_values(vals).unwrap();
        let err = prof.schwarz_integral(&rvec(&[0.0]), Complex64::new(0.99, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Numeric { .. }));
        assert!(prof.schwarz_integral(&rvec(&[0.0]), Complex64::new(0.9995, 0.0)).is_err());
    }

    #[test]
    fn singular_grid_angles_have_no_value() {
        let p = GeodesicParams::from_parts(&[0.5, 0.0], &[0.0, 0.0], &[0.0, 0.0], &[0.0, 0.0]).unwrap();
        let prof = boundary_profile(&BaseDomain::unit_ball(2), &p, 64).unwrap();
        assert!(prof.values()[16].is_none() && prof.values()[48].is_none());
        assert_eq!(prof.values()[0].as_ref().unwrap(), &rvec(&[1.0, 0.0]));
        assert_eq!(prof.values()[32].as_ref().unwrap(), &rvec(&[-1.0, 0.0]));
        let f = prof.schwarz_integral(&rvec(&[0.0, 0.0]), Complex64::new(0.0, 0.0)).unwrap();
        assert!(f[0].norm() < 1e-12);
    }
}
