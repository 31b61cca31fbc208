//! Adaptive Gauss–Kronrod integration of vector-valued integrands on an
//! interval with prescribed breakpoints, plus polynomial extrapolation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_626_368_300,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone)]
pub struct Integral {
    pub value: Vec<f64>,
    pub error: f64,
    pub evaluations: usize,
}

/// Globally adaptive GK21 integrator. The error on a panel is the max-norm
/// difference between the Kronrod and embedded Gauss results.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveGk {
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for AdaptiveGk {
    fn default() -> Self {
        AdaptiveGk {
            abs_tol: 1e-12,
            max_panels: 20_000,
        }
    }
}

// a panel covers anchor + [a, b]
struct Panel {
    anchor: f64,
    a: f64,
    b: f64,
    value: Vec<f64>,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk21<F>(f: &mut F, anchor: f64, a: f64, b: f64, dim: usize, buf: &mut [f64]) -> Result<(Vec<f64>, f64)>
where
    F: FnMut(f64, f64, &mut [f64]) -> Result<()>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    f(anchor, c, buf)?;
    for d in 0..dim {
        k[d] += WGK[10] * buf[d];
    }
    for j in 0..10 {
        let dx = h * XGK[j];
        for x in [c - dx, c + dx] {
            f(anchor, x, buf)?;
            for d in 0..dim {
                k[d] += WGK[j] * buf[d];
                if j % 2 == 1 {
                    g[d] += WG[j / 2] * buf[d];
                }
            }
        }
    }
    let mut err = 0.0f64;
    for d in 0..dim {
        k[d] *= h;
        g[d] *= h;
        err = err.max((k[d] - g[d]).abs());
    }
    if k.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric("non-finite integrand value", f64::INFINITY));
    }
    Ok((k, err))
}

impl AdaptiveGk {
    pub fn new(abs_tol: f64) -> Self {
        AdaptiveGk {
            abs_tol,
            ..Default::default()
        }
    }

    /// Integrates `f` over `[breaks[0], breaks[last]]`; interior breakpoints
    /// start as panel boundaries so discontinuities placed there are never
    /// straddled. `f(t, out)` writes `dim` components into `out`.
    pub fn integrate<F>(&self, dim: usize, breaks: &[f64], mut f: F) -> Result<Integral>
    where
        F: FnMut(f64, &mut [f64]) -> Result<()>,
    {
        self.integrate_anchored(dim, breaks, |anchor, u, out| f(anchor + u, out))
    }

    /// As `integrate`, but nodes are passed as `(anchor, u)` with `t = anchor + u`
    /// and `anchor` one of the breakpoints. Near a breakpoint `u` keeps full
    /// relative precision, which matters for integrands peaked there.
    pub fn integrate_anchored<F>(&self, dim: usize, breaks: &[f64], mut f: F) -> Result<Integral>
    where
        F: FnMut(f64, f64, &mut [f64]) -> Result<()>,
    {
        assert!(breaks.len() >= 2, "need at least two breakpoints");
        let mut buf = vec![0.0; dim];
        let mut heap = BinaryHeap::new();
        let mut done: Vec<Panel> = Vec::new();
        let mut evals = 0usize;
        for w in breaks.windows(2) {
            if !(w[1] > w[0]) {
                continue;
            }
            let half = 0.5 * (w[1] - w[0]);
            for (anchor, a, b) in [(w[0], 0.0, half), (w[1], -half, 0.0)] {
                let (value, err) = gk21(&mut f, anchor, a, b, dim, &mut buf)?;
                evals += 21;
                heap.push(Panel { anchor, a, b, value, err });
            }
        }
        let span = breaks[breaks.len() - 1] - breaks[0];
        let mut total: f64 = heap.iter().map(|p| p.err).sum();
        let mut panels = heap.len();
        while total > self.abs_tol {
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            let width = worst.b - worst.a;
            // resolution limit of the offsets
            if width < 1e-15 * worst.a.abs().max(worst.b.abs()) || width < 1e-30 * span || mid <= worst.a || mid >= worst.b {
                total -= worst.err;
                done.push(worst);
                continue;
            }
            if panels >= self.max_panels {
                heap.push(worst);
                let est: f64 = heap.iter().chain(done.iter()).map(|p| p.err).sum();
                return Err(Error::numeric("adaptive quadrature exhausted its panel budget", est));
            }
            let (v1, e1) = gk21(&mut f, worst.anchor, worst.a, mid, dim, &mut buf)?;
            let (v2, e2) = gk21(&mut f, worst.anchor, mid, worst.b, dim, &mut buf)?;
            evals += 42;
            panels += 1;
            total += e1 + e2 - worst.err;
            heap.push(Panel {
                anchor: worst.anchor,
                a: worst.a,
                b: mid,
                value: v1,
                err: e1,
            });
            heap.push(Panel {
                anchor: worst.anchor,
                a: mid,
                b: worst.b,
                value: v2,
                err: e2,
            });
            if total <= self.abs_tol {
                // guard against drift in the running sum
                total = heap.iter().map(|p| p.err).sum();
            }
        }
        let mut value = vec![0.0; dim];
        let mut error = 0.0;
        for p in heap.iter().chain(done.iter()) {
            for d in 0..dim {
                value[d] += p.value[d];
            }
            error += p.err;
        }
        Ok(Integral {
            value,
            error,
            evaluations: evals,
        })
    }
}

/// Neville extrapolation to `h = 0` of samples `(h_i, v_i)`.
pub fn extrapolate_to_zero(h: &[f64], v: &[f64]) -> f64 {
    assert_eq!(h.len(), v.len());
    let mut p = v.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
        }
    }
    p[0]
}

/// Limit at `h = 0` of the interpolant in the basis `1, h log h, h, h², …`,
/// which absorbs the `h log h` term produced by a kink in the data.
pub fn extrapolate_log_to_zero(h: &[f64], v: &[f64]) -> f64 {
    assert_eq!(h.len(), v.len());
    let n = h.len();
    let basis = |x: f64, k: usize| match k {
        0 => 1.0,
        1 => x * x.ln(),
        _ => x.powi(k as i32 - 1),
    };
    let m = DMatrix::from_fn(n, n, |i, k| basis(h[i], k));
    match m.lu().solve(&DVector::from_column_slice(v)) {
        Some(c) => c[0],
        None => extrapolate_to_zero(h, v),
    }
}
