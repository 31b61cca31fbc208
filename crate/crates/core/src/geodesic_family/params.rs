use std::f64::consts::TAU;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CVec, RVec};

/// Case label of the direction map `F = F̃/‖F̃‖` on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FCaseLabel {
    CircleEmbedding,
    SmallArc,
    OpenSemicircle,
    TwoAntipodalValues,
}

impl FCaseLabel {
    pub fn singular_count(self) -> usize {
        match self {
            FCaseLabel::CircleEmbedding | FCaseLabel::SmallArc => 0,
            FCaseLabel::OpenSemicircle => 1,
            FCaseLabel::TwoAntipodalValues => 2,
        }
    }
}

impl fmt::Display for FCaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FCaseLabel::CircleEmbedding => "CIRCLE_EMBEDDING",
            FCaseLabel::SmallArc => "SMALL_ARC",
            FCaseLabel::OpenSemicircle => "OPEN_SEMICIRCLE",
            FCaseLabel::TwoAntipodalValues => "TWO_ANTIPODAL_VALUES",
        })
    }
}

/// `h(λ) = aλ² + bλ + ā`, componentwise.
pub fn h_poly(a: &CVec, b: &RVec, lambda: Complex64) -> CVec {
    CVec::from_iterator(
        a.len(),
        a.iter().zip(b.iter()).map(|(ai, bi)| ai * lambda * lambda + lambda * *bi + ai.conj()),
    )
}

/// `F̃(t) = 2 Re(a e^{it}) + b = 2 cos t Re a − 2 sin t Im a + b`.
pub fn f_tilde(a: &CVec, b: &RVec, t: f64) -> RVec {
    let (s, c) = t.sin_cos();
    RVec::from_iterator(a.len(), a.iter().zip(b.iter()).map(|(ai, bi)| 2.0 * (c * ai.re - s * ai.im) + bi))
}

/// `dF̃/dt`.
pub fn f_tilde_prime(a: &CVec, t: f64) -> RVec {
    let (s, c) = t.sin_cos();
    RVec::from_iterator(a.len(), a.iter().map(|ai| -2.0 * (s * ai.re + c * ai.im)))
}

const SCAN: usize = 2048;
pub(crate) const SINGULAR_TOL: f64 = 1e-10;

/// Local minima of `‖F̃‖` on the circle, refined by Gauss–Newton:
/// `(angle in [0, 2π), ‖F̃‖, ‖F̃'‖)`.
pub(crate) fn norm_minima(a: &CVec, b: &RVec) -> Vec<(f64, f64, f64)> {
    let vals: Vec<f64> = (0..SCAN)
        .map(|j| f_tilde(a, b, TAU * j as f64 / SCAN as f64).norm_squared())
        .collect();
    let vmax = vals.iter().cloned().fold(0.0, f64::max);
    let mut out: Vec<(f64, f64, f64)> = Vec::new();
    for j in 0..SCAN {
        if vals[j] > 0.25 * vmax {
            continue;
        }
        let prev = vals[(j + SCAN - 1) % SCAN];
        let next = vals[(j + 1) % SCAN];
        if !(vals[j] <= prev && vals[j] < next) {
            continue;
        }
        let mut t = TAU * j as f64 / SCAN as f64;
        // Newton on φ(t) = ⟨F̃, F̃'⟩ (derivative of ½‖F̃‖²)
        for _ in 0..60 {
            let f = f_tilde(a, b, t);
            let fp = f_tilde_prime(a, t);
            let (s, c) = t.sin_cos();
            let fpp = RVec::from_iterator(a.len(), a.iter().map(|ai| -2.0 * (c * ai.re - s * ai.im)));
            let phi = f.dot(&fp);
            let dphi = fp.norm_squared() + f.dot(&fpp);
            let step = if dphi > 0.0 { phi / dphi } else { phi / fp.norm_squared().max(1e-300) };
            let step = step.clamp(-TAU / SCAN as f64 * 4.0, TAU / SCAN as f64 * 4.0);
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let mut t = t.rem_euclid(TAU);
        if t >= TAU {
            t = 0.0;
        }
        let fnorm = f_tilde(a, b, t).norm();
        let dnorm = f_tilde_prime(a, t).norm();
        if !out.iter().any(|(s, _, _)| angle_dist(*s, t) < 1e-9) {
            out.push((t, fnorm, dnorm));
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

pub(crate) fn angle_dist(s: f64, t: f64) -> f64 {
    let d = (s - t).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Angles in `[0, 2π)` where `F̃` vanishes. Errors when `F̃ ≡ 0`.
pub fn singular_points(a: &CVec, b: &RVec) -> Result<Vec<f64>> {
    if a.iter().all(|c| c.norm() == 0.0) && b.iter().all(|x| *x == 0.0) {
        return Err(Error::DegenerateParams("F̃ vanishes identically".into()));
    }
    let scale = (linalg::cnorm(a).powi(2) + b.norm_squared()).sqrt();
    let mut pts: Vec<f64> = norm_minima(a, b)
        .into_iter()
        .filter(|(_, v, _)| *v <= SINGULAR_TOL * scale)
        .map(|(t, _, _)| t)
        .collect();
    if pts.len() > 2 {
        // only possible when F̃ ≡ 0 up to rounding
        return Err(Error::DegenerateParams("F̃ vanishes on more than two angles".into()));
    }
    pts.sort_by(|x, y| x.total_cmp(y));
    Ok(pts)
}

/// Parameters `(a, b)` of a complex geodesic, normalised to `‖a‖² + ‖b‖² = 1`,
/// plus the imaginary offset `Im f(0)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicParams {
    #[serde(with = "cvec_serde")]
    a: CVec,
    #[serde(with = "rvec_serde")]
    b: RVec,
    #[serde(with = "rvec_serde")]
    im_f0: RVec,
    singular: Vec<f64>,
    label: FCaseLabel,
}

impl GeodesicParams {
    pub fn new(a: CVec, b: RVec, im_f0: RVec) -> Result<Self> {
        let n = a.len();
        if n == 0 || b.len() != n || im_f0.len() != n {
            return Err(Error::Argument("a, b and Im f(0) must share the dimension".into()));
        }
        if a.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) || b.iter().chain(im_f0.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Argument("non-finite geodesic parameters".into()));
        }
        let scale = (linalg::cnorm(&a).powi(2) + b.norm_squared()).sqrt();
        if !(scale > 0.0) {
            return Err(Error::DegenerateParams("(a, b) = (0, 0)".into()));
        }
        let a = a / Complex64::new(scale, 0.0);
        let b = b / scale;
        check_nonconstant(&a, &b)?;
        let singular = singular_points(&a, &b)?;
        let label = classify(&a, singular.len())?;
        Ok(GeodesicParams { a, b, im_f0, singular, label })
    }

    pub fn from_parts(re_a: &[f64], im_a: &[f64], b: &[f64], im_f0: &[f64]) -> Result<Self> {
        GeodesicParams::new(
            linalg::complexify(&linalg::rvec(re_a), &linalg::rvec(im_a)),
            linalg::rvec(b),
            linalg::rvec(im_f0),
        )
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &CVec {
        &self.a
    }

    pub fn b(&self) -> &RVec {
        &self.b
    }

    pub fn im_f0(&self) -> &RVec {
        &self.im_f0
    }

    pub fn with_im_f0(&self, im_f0: RVec) -> Self {
        GeodesicParams { im_f0, ..self.clone() }
    }

    pub fn h(&self, lambda: Complex64) -> CVec {
        h_poly(&self.a, &self.b, lambda)
    }

    pub fn f_tilde(&self, t: f64) -> RVec {
        f_tilde(&self.a, &self.b, t)
    }

    pub fn f_tilde_prime(&self, t: f64) -> RVec {
        f_tilde_prime(&self.a, t)
    }

    /// Direction `F(e^{it}) = F̃/‖F̃‖`; `None` at a singular angle.
    pub fn direction(&self, t: f64) -> Option<RVec> {
        linalg::unit(&self.f_tilde(t))
    }

    pub fn singular_points(&self) -> &[f64] {
        &self.singular
    }

    pub fn case_label(&self) -> FCaseLabel {
        self.label
    }

    /// One-sided limits `(F(t_s⁺), F(t_s⁻))` at a singular angle.
    pub fn one_sided_directions(&self, ts: f64) -> (RVec, RVec) {
        let d = linalg::unit(&self.f_tilde_prime(ts)).expect("simple zero of F̃");
        (d.clone(), -d)
    }

    /// Parameters of `f ∘ m` for `m(μ) = (μ + α)/(1 + αμ)`, `α ∈ (−1, 1)`:
    /// on the circle `F̃ ∘ m = |1 + αμ|^{-2} F̃'` with `h'(μ) = (1 + αμ)² h(m(μ))`.
    pub fn precompose(&self, alpha: f64, im_f0: RVec) -> Result<Self> {
        if !(alpha.abs() < 1.0) {
            return Err(Error::Argument(format!("Möbius parameter {alpha} outside (−1, 1)")));
        }
        let a = CVec::from_iterator(
            self.dim(),
            self.a.iter().zip(self.b.iter()).map(|(ai, bi)| ai + alpha * bi + alpha * alpha * ai.conj()),
        );
        let b = RVec::from_iterator(
            self.dim(),
            self.a.iter().zip(self.b.iter()).map(|(ai, bi)| 4.0 * alpha * ai.re + bi * (1.0 + alpha * alpha)),
        );
        GeodesicParams::new(a, b, im_f0)
    }

    /// Flattened `(Re a, Im a, b)`.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.a.iter().map(|c| c.re).collect();
        v.extend(self.a.iter().map(|c| c.im));
        v.extend(self.b.iter());
        v
    }
}

pub fn classify_case(params: &GeodesicParams) -> FCaseLabel {
    params.label
}

fn check_nonconstant(a: &CVec, b: &RVec) -> Result<()> {
    let n = a.len();
    let mut m = DMatrix::<f64>::zeros(n, 3);
    for i in 0..n {
        m[(i, 0)] = a[i].re;
        m[(i, 1)] = a[i].im;
        m[(i, 2)] = b[i];
    }
    if linalg::numerical_rank(&m, 1e-12) >= 2 {
        return Ok(());
    }
    // all of Re a, Im a, b lie on one line ℝv: F̃(t) = (A cos t + B sin t + C) v
    let col = (0..3).max_by(|&i, &j| m.column(i).norm().total_cmp(&m.column(j).norm())).unwrap();
    let v = linalg::unit(&m.column(col).into_owned()).ok_or_else(|| Error::DegenerateParams("(a, b) = (0, 0)".into()))?;
    let big_a = 2.0 * v.dot(&m.column(0));
    let big_b = -2.0 * v.dot(&m.column(1));
    let big_c = v.dot(&m.column(2));
    let amp = big_a.hypot(big_b);
    if big_c.abs() >= amp * (1.0 - 1e-12) {
        let what = if big_c.abs() > amp * (1.0 + 1e-12) {
            "direction map F is constant"
        } else {
            "0 is an endpoint of the segment image of F̃ (F constant off one point)"
        };
        return Err(Error::DegenerateParams(what.into()));
    }
    Ok(())
}

fn classify(a: &CVec, singular: usize) -> Result<FCaseLabel> {
    Ok(match singular {
        0 => {
            let n = a.len();
            let mut m = DMatrix::<f64>::zeros(n, 2);
            for i in 0..n {
                m[(i, 0)] = a[i].re;
                m[(i, 1)] = a[i].im;
            }
            if linalg::numerical_rank(&m, 1e-12) == 2 {
                FCaseLabel::CircleEmbedding
            } else {
                FCaseLabel::SmallArc
            }
        }
        1 => FCaseLabel::OpenSemicircle,
        2 => FCaseLabel::TwoAntipodalValues,
        _ => return Err(Error::DegenerateParams("more than two singular points".into())),
    })
}

/// Canonical angle window start: the first singular angle, or 0.
pub(crate) fn window_start(singular: &[f64]) -> f64 {
    singular.first().copied().unwrap_or(0.0)
}


mod cvec_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &CVec, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(f64, f64)> = v.iter().map(|c| (c.re, c.im)).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CVec, D::Error> {
        let pairs: Vec<(f64, f64)> = Vec::deserialize(d)?;
        Ok(CVec::from_iterator(pairs.len(), pairs.into_iter().map(|(r, i)| Complex64::new(r, i))))
    }
}

mod rvec_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &RVec, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<RVec, D::Error> {
        let v: Vec<f64> = Vec::deserialize(d)?;
        Ok(RVec::from_vec(v))
    }
}
