//! Small vector helpers shared across modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type RVec = DVector<f64>;
pub type CVec = DVector<Complex64>;

pub fn rvec(xs: &[f64]) -> RVec {
    RVec::from_column_slice(xs)
}

pub fn cvec(xs: &[Complex64]) -> CVec {
    CVec::from_column_slice(xs)
}

/// Unit basis vector `e_i` in dimension `n`.
pub fn basis(n: usize, i: usize) -> RVec {
    let mut e = RVec::zeros(n);
    e[i] = 1.0;
    e
}

pub fn unit(v: &RVec) -> Option<RVec> {
    let n = v.norm();
    if n > 0.0 && n.is_finite() {
        Some(v / n)
    } else {
        None
    }
}

pub fn re(v: &CVec) -> RVec {
    v.map(|c| c.re)
}

pub fn im(v: &CVec) -> RVec {
    v.map(|c| c.im)
}

pub fn complexify(re: &RVec, im: &RVec) -> CVec {
    CVec::from_iterator(re.len(), re.iter().zip(im.iter()).map(|(&a, &b)| Complex64::new(a, b)))
}

pub fn cnorm(v: &CVec) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis of the hyperplane orthogonal to the unit vector `p`,
/// returned as the columns of an `n x (n-1)` matrix (Householder construction).
pub fn tangent_basis(p: &RVec) -> DMatrix<f64> {
    let n = p.len();
    let sign = if p[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut v = p.clone();
    v[0] += sign;
    let vv = v.dot(&v);
    let mut h = DMatrix::<f64>::identity(n, n);
    if vv > 0.0 {
        h -= (&v * v.transpose()) * (2.0 / vv);
    }
    h.columns(1, n - 1).into_owned()
}

/// Rank of the columns of `m` with singular values below `rel_tol * s_max` discarded.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Round to 12 significant digits, the precision used in every emitted report.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.11e}", x).parse().unwrap_or(x)
}

/// [`sig12`] as text: plain decimals for moderate magnitudes, exponent form otherwise.
pub fn fmt_sig12(x: f64) -> String {
    let y = sig12(x);
    let a = y.abs();
    if y == 0.0 || !y.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{}", y)
    } else {
        format!("{:e}", y)
    }
}
