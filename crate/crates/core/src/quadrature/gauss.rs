//! Gauss–Legendre and Gauss–Laguerre rules computed by Newton iteration.

use std::f64::consts::PI;

/// n-point Gauss–Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// A fixed Gauss–Legendre rule that can be mapped onto any interval.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre_nodes(n);
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        h * self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(c + h * t)).sum::<f64>()
    }

    /// Composite rule on `panels` equal sub-intervals of [a, b].
    pub fn composite<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels).map(|j| self.integrate(&mut f, a + j as f64 * h, a + (j + 1) as f64 * h)).sum()
    }
}

/// n-point Gauss–Laguerre rule for ∫_0^∞ e^{-x} f(x) dx.
///
/// Weights come from the Christoffel sum, rescaled so that large n does not
/// overflow.
pub fn gauss_laguerre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - x[i - 2])
            }
        };
        let mut polish = false;
        for _ in 0..200 {
            let (ln, lnm1, _) = scaled_laguerre(n, z);
            // L_n'(z) = n (L_n - L_{n-1}) / z
            let d = nf * (ln - lnm1) / z;
            let dz = ln / d;
            z -= dz;
            if polish {
                break;
            }
            polish = dz.abs() <= 1e-14 * z.abs();
        }
        x[i] = z;
        w[i] = christoffel_weight(n, z);
    }
    (x, w)
}

/// (L_n, L_{n-1}) scaled by a common positive factor.
fn scaled_laguerre(n: usize, x: f64) -> (f64, f64, f64) {
    let (mut p0, mut p1) = (0.0, 1.0);
    let mut log_scale = 0.0;
    for j in 0..n {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0 - x) * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
        if p1.abs() > 1e100 {
            p0 *= 1e-100;
            p1 *= 1e-100;
            log_scale += 100.0 * std::f64::consts::LN_10;
        }
    }
    (p1, p0, log_scale)
}

/// 1 / Σ_{j<n} L_j(x)², which is insensitive to small node errors.
fn christoffel_weight(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (0.0, 1.0);
    let mut sum = 1.0;
    let mut log_scale = 0.0;
    for j in 0..n - 1 {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0 - x) * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
        sum += p1 * p1;
        if p1.abs() > 1e100 {
            p0 *= 1e-100;
            p1 *= 1e-100;
            sum *= 1e-200;
            log_scale += 100.0 * std::f64::consts::LN_10;
        }
    }
    (-sum.ln() - 2.0 * log_scale).exp()
}
