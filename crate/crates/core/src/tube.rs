use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CVec, RVec};

/// A point of the tube `T_Ω = Ω + iℝⁿ ⊂ ℂⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TubePoint(pub CVec);

impl TubePoint {
    pub fn new(re: &[f64], im: &[f64]) -> Self {
        assert_eq!(re.len(), im.len(), "real and imaginary parts differ in length");
        TubePoint(linalg::complexify(&linalg::rvec(re), &linalg::rvec(im)))
    }

    pub fn real(re: &[f64]) -> Self {
        TubePoint(CVec::from_iterator(re.len(), re.iter().map(|&x| Complex64::new(x, 0.0))))
    }

    pub fn from_parts(re: &RVec, im: &RVec) -> Self {
        TubePoint(linalg::complexify(re, im))
    }

    pub fn from_complex(v: Vec<Complex64>) -> Self {
        TubePoint(CVec::from_vec(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn re(&self) -> RVec {
        linalg::re(&self.0)
    }

    pub fn im(&self) -> RVec {
        linalg::im(&self.0)
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|c| c.im == 0.0)
    }

    pub fn translate_imag(&self, m: &RVec) -> TubePoint {
        TubePoint::from_parts(&self.re(), &(self.im() + m))
    }

    pub fn scale(&self, t: f64) -> TubePoint {
        TubePoint(&self.0 * Complex64::new(t, 0.0))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn distance_to(&self, other: &TubePoint) -> f64 {
        linalg::cnorm(&(&self.0 - &other.0))
    }
}

impl fmt::Display for TubePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| format!("{}", c)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Parses a comma separated coordinate list such as `0.5, 0.1+0.2i, -0.3i`.
impl FromStr for TubePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords: Result<Vec<Complex64>> = s
            .split(',')
            .map(|tok| {
                let tok: String = tok.chars().filter(|c| !c.is_whitespace()).collect();
                Complex64::from_str(&tok)
                    .map_err(|_| Error::Parse(format!("malformed coordinate '{}'", tok)))
            })
            .collect();
        let coords = coords?;
        if coords.is_empty() {
            return Err(Error::Parse("empty point literal".into()));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Parse(format!("non-finite coordinate in '{}'", s)));
        }
        Ok(TubePoint::from_complex(coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_complex_literals() {
        let p: TubePoint = "0.5, 0.1+0.2i, -0.3i".parse().unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.0[0], Complex64::new(0.5, 0.0));
        assert_eq!(p.0[1], Complex64::new(0.1, 0.2));
        assert_eq!(p.0[2], Complex64::new(0.0, -0.3));
    }

    #[test]
    fn rejects_garbage() {
        assert!("0.5, abc".parse::<TubePoint>().is_err());
        assert!("".parse::<TubePoint>().is_err());
    }
}
