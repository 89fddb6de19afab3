//! Globally adaptive Gauss–Kronrod (7, 15) integration of complex-valued
//! integrands, with an optional initial partition.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Absolute and relative error targets; the stricter of the two wins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub fn abs(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value)
    }
}

/// One GK15 panel: (Kronrod estimate, error estimate, ∫|f| estimate).
pub fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = fc.norm() * WGK[7];
    let mut fv = [Complex64::new(0.0, 0.0); 14];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        resk += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            resg += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[2 * j] - mean).norm() + (fv[2 * j + 1] - mean).norm());
    }
    let hh = h.abs();
    let resasc = resasc * hh;
    let mut err = ((resk - resg) * h).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (1.0f64).min((200.0 * err / resasc).powf(1.5));
    }
    let round = 50.0 * f64::EPSILON * resabs * hh;
    if round > err {
        err = round;
    }
    (resk * h, err, resabs * hh)
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    l1: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
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

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub abs_integral: f64,
}

/// Adaptive integration over the partition given by `breaks` (ascending,
/// at least two points).
pub fn integrate_partition<F: FnMut(f64) -> Complex64>(
    mut f: F,
    breaks: &[f64],
    tol: Tolerance,
    max_panels: usize,
) -> Result<Estimate> {
    assert!(breaks.len() >= 2);
    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut l1 = 0.0;
    for w in breaks.windows(2) {
        if !(w[1] > w[0]) {
            continue;
        }
        let (v, e, r) = gk15(&mut f, w[0], w[1]);
        total += v;
        err += e;
        l1 += r;
        heap.push(Panel { a: w[0], b: w[1], value: v, err: e, l1: r });
    }
    let mut count = heap.len();
    // below ~100 ulp of ∫|f| the estimate is rounding noise
    while err > tol.target(total.norm()).max(100.0 * f64::EPSILON * l1) {
        if !err.is_finite() || !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::Integrability("non-finite integrand values".into()));
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot subdivide further in floating point
            heap.push(worst);
            break;
        }
        let (v1, e1, r1) = gk15(&mut f, worst.a, mid);
        let (v2, e2, r2) = gk15(&mut f, mid, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        l1 += r1 + r2 - worst.l1;
        heap.push(Panel { a: worst.a, b: mid, value: v1, err: e1, l1: r1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, err: e2, l1: r2 });
        count += 1;
        if count > max_panels {
            return Err(Error::Integrability(format!(
                "adaptive refinement exceeded {max_panels} panels (error estimate {err:.3e})"
            )));
        }
    }
    // re-sum to shed accumulated rounding from the running updates
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.err).sum();
    Ok(Estimate { value, error, abs_integral: l1 })
}

/// Adaptive integration over [a, b].
pub fn integrate<F: FnMut(f64) -> Complex64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    integrate_partition(f, &[a, b], tol, 10_000)
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    Ok(integrate(|x| Complex64::from(f(x)), a, b, tol)?.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_integrals() {
        let r = integrate_real(|x| x.exp(), 0.0, 1.0, Tolerance::new(1e-14, 1e-14)).unwrap();
        assert!((r - (1f64.exp() - 1.0)).abs() < 1e-14);
        let r = integrate(|x| Complex64::new(0.0, 3.0 * x).exp(), 0.0, 10.0, Tolerance::abs(1e-13)).unwrap();
        let exact = (Complex64::new(0.0, 30.0).exp() - 1.0) / Complex64::new(0.0, 3.0);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate_real(|x| 1.0 / x.sqrt(), 0.0, 1.0, Tolerance::new(1e-10, 1e-10)).unwrap();
        assert!((r - 2.0).abs() < 1e-9);
    }

    #[test]
    fn runaway_refinement_is_reported() {
        let r = integrate_partition(|x| Complex64::from(1.0 / x), &[0.0, 1.0], Tolerance::abs(1e-12), 200);
        assert!(matches!(r, Err(Error::Integrability(_))));
    }
}
