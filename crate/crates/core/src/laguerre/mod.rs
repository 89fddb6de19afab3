//! Laguerre polynomials, the orthonormal functions ℓ_n on the half-line, the
//! non-negative product function Λ and the closed-form product integrals
//! built from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::special::{binomial, factorial, gamma, gamma_complex, pochhammer};

/// Upward three-term recurrence for L_n^{(α)} up to a fixed degree.
///
/// The recurrence coefficients are computed once; the struct is immutable
/// afterwards and can be shared between threads.
#[derive(Debug, Clone)]
pub struct LaguerreBasis {
    max_degree: usize,
    alpha: f64,
    /// (2n+1+α)/(n+1), 1/(n+1), (n+α)/(n+1) for n = 0..max_degree-1
    coeffs: Vec<(f64, f64, f64)>,
}

impl LaguerreBasis {
    pub fn new(max_degree: usize, alpha: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return domain(format!("Laguerre type alpha must exceed -1, got {alpha}"));
        }
        let coeffs = (0..max_degree)
            .map(|n| {
                let n = n as f64;
                ((2.0 * n + 1.0 + alpha) / (n + 1.0), 1.0 / (n + 1.0), (n + alpha) / (n + 1.0))
            })
            .collect();
        Ok(Self { max_degree, alpha, coeffs })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Fills `out[0..=max_degree]` with L_0^{(α)}(x), ..., L_max^{(α)}(x).
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        assert!(out.len() > self.max_degree);
        out[0] = 1.0;
        if self.max_degree == 0 {
            return;
        }
        out[1] = 1.0 + self.alpha - x;
        for n in 1..self.max_degree {
            let (a, b, c) = self.coeffs[n];
            out[n + 1] = (a - b * x) * out[n] - c * out[n - 1];
        }
    }

    pub fn eval_all(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.max_degree + 1];
        self.eval_into(x, &mut out);
        out
    }

    /// L_n^{(α)}(x) for a single n ≤ max_degree.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        assert!(n <= self.max_degree, "degree {n} above basis maximum {}", self.max_degree);
        let (mut prev, mut cur) = (0.0, 1.0);
        for j in 0..n {
            let (a, b, c) = self.coeffs[j];
            let next = (a - b * x) * cur - c * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// ℓ_n(x) = e^{-x/2} L_n^{(α)}(x).
    pub fn ell(&self, n: usize, x: f64) -> f64 {
        (-0.5 * x).exp() * self.eval(n, x)
    }
}

fn check_degree(n: i64) -> Result<usize> {
    if n < 0 {
        return domain(format!("Laguerre degree must be non-negative, got {n}"));
    }
    Ok(n as usize)
}

/// L_n^{(α)}(x) by upward recurrence.
pub fn laguerre_eval(n: i64, alpha: f64, x: f64) -> Result<f64> {
    let n = check_degree(n)?;
    Ok(LaguerreBasis::new(n, alpha)?.eval(n, x))
}

/// ℓ_n(y) = e^{-y/2} L_n(y), the orthonormal Laguerre functions on (0, ∞).
pub fn ell_eval(n: i64, y: f64) -> Result<f64> {
    let n = check_degree(n)?;
    Ok(ell(n, y))
}

/// Unchecked ℓ_n(y) for internal hot loops.
pub(crate) fn ell(n: usize, y: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for j in 0..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 - y) * cur - jf * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    (-0.5 * y).exp() * cur
}

/// Parameters of Λ_{p,m,n}^{(α,β)}(x) = x^p e^{-x} |L_m^{(α)}(x) L_n^{(β)}(x)|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaParams {
    pub p: Complex64,
    pub m: usize,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl LambdaParams {
    pub fn new(p: Complex64, m: usize, n: usize, alpha: f64, beta: f64) -> Result<Self> {
        let params = Self { p, m, n, alpha, beta };
        params.validate()?;
        Ok(params)
    }

    pub fn real(p: f64, m: usize, n: usize, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Complex64::from(p), m, n, alpha, beta)
    }

    fn validate(&self) -> Result<()> {
        if !(self.p.re > -1.0) {
            return domain(format!("Re p must exceed -1, got {}", self.p.re));
        }
        if !(self.alpha >= -0.5 && self.beta >= -0.5) {
            return domain(format!(
                "Laguerre types must be at least -1/2, got alpha={} beta={}",
                self.alpha, self.beta
            ));
        }
        Ok(())
    }
}

/// Λ_{p,m,n}^{(α,β)}(x). Only real exponents are accepted here; complex `p`
/// enters solely through [`laguerre_product_integral`].
pub fn lambda_eval(params: &LambdaParams, x: f64) -> Result<f64> {
    params.validate()?;
    if params.p.im != 0.0 {
        return domain("lambda_eval requires a real exponent p");
    }
    if !(x >= 0.0) {
        return domain(format!("lambda_eval requires x >= 0, got {x}"));
    }
    let lm = LaguerreBasis::new(params.m, params.alpha)?.eval(params.m, x);
    let ln = LaguerreBasis::new(params.n, params.beta)?.eval(params.n, x);
    let power = if x == 0.0 {
        if params.p.re == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        x.powf(params.p.re)
    };
    Ok(power * (-x).exp() * (lm * ln).abs())
}

/// ∫_0^∞ x^p e^{-x} L_m^{(α)}(x) L_n^{(β)}(x) dx as the finite sum
/// Γ(p+1) Σ_i (-1)^{m+n} C(p-α, m-i) C(p-β, n-i) C(p+i, i).
pub fn laguerre_product_integral(p: Complex64, alpha: f64, beta: f64, m: usize, n: usize) -> Result<Complex64> {
    if !(p.re > -1.0) {
        return domain(format!("Re p must exceed -1, got {}", p.re));
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return domain(format!("Laguerre types must exceed -1, got alpha={alpha} beta={beta}"));
    }
    let sign = if (m + n).is_multiple_of(2) { 1.0 } else { -1.0 };
    let sum: Complex64 = (0..=m.min(n))
        .map(|i| {
            binomial(p - alpha, (m - i) as u32) * binomial(p - beta, (n - i) as u32) * binomial(p + i as f64, i as u32)
        })
        .sum();
    Ok(gamma_complex(p + 1.0) * sum * sign)
}

/// The majorant Σ_i Σ_j (α+1)_{m-i}/((m-i)! i!) (β+1)_{n-j}/((n-j)! j!) Γ(p+i+j+1)
/// of ∫ Λ_{p,m,n}^{(α,β)}. For complex p the bound uses Re p, since
/// |x^p| = x^{Re p}.
pub fn lambda_bound_constant(params: &LambdaParams) -> Result<f64> {
    params.validate()?;
    let p = params.p.re;
    let coef = |a: f64, deg: usize, i: usize| pochhammer(a + 1.0, (deg - i) as u32) / (factorial((deg - i) as u32) * factorial(i as u32));
    let mut total = 0.0;
    for i in 0..=params.m {
        let ci = coef(params.alpha, params.m, i);
        for j in 0..=params.n {
            total += ci * coef(params.beta, params.n, j) * gamma(p + (i + j) as f64 + 1.0);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss::GaussLegendre;

    #[test]
    fn low_degree_values() {
        assert_eq!(laguerre_eval(0, 0.0, 7.3).unwrap(), 1.0);
        for &(a, x) in &[(0.0, 0.3), (1.5, 2.0), (-0.5, 10.0)] {
            assert!((laguerre_eval(1, a, x).unwrap() - (1.0 + a - x)).abs() < 1e-15);
        }
        // L_2(x) = 1 - 2x + x^2/2
        assert!((laguerre_eval(2, 0.0, 1.0).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(laguerre_eval(-1, 0.0, 1.0).is_err());
        assert!(laguerre_eval(3, -1.0, 1.0).is_err());
        assert!(ell_eval(-2, 1.0).is_err());
        assert!(lambda_eval(&LambdaParams::real(0.0, 0, 0, 0.0, 0.0).unwrap(), -1.0).is_err());
        let complex = LambdaParams::new(Complex64::new(0.0, 1.0), 0, 0, 0.0, 0.0).unwrap();
        assert!(lambda_eval(&complex, 1.0).is_err());
        assert!(laguerre_product_integral(Complex64::from(-1.0), 0.0, 0.0, 0, 0).is_err());
    }

    #[test]
    fn value_at_origin_is_binomial() {
        // L_n^{(α)}(0) = C(n+α, n)
        for n in 0..=50usize {
            for &a in &[0.0, 0.5, 1.0, 3.0] {
                let exact = binomial(Complex64::from(n as f64 + a), n as u32).re;
                let got = laguerre_eval(n as i64, a, 0.0).unwrap();
                assert!((got - exact).abs() <= 1e-12 * exact.abs().max(1.0), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn explicit_sum_agreement() {
        // L_n^{(α)}(x) = Σ_k C(n+α, n-k) (-x)^k / k!
        for n in 0..=12usize {
            for &x in &[0.1f64, 1.0, 4.0, 9.5] {
                let a = 0.5;
                let explicit: f64 = (0..=n)
                    .map(|k| binomial(Complex64::from(n as f64 + a), (n - k) as u32).re * (-x).powi(k as i32) / factorial(k as u32))
                    .sum();
                let got = laguerre_eval(n as i64, a, x).unwrap();
                assert!((got - explicit).abs() <= 1e-11 * explicit.abs().max(1.0));
            }
        }
    }

    #[test]
    fn ell_values() {
        for k in 0..10 {
            assert_eq!(ell_eval(k, 0.0).unwrap(), 1.0);
        }
        assert!((ell_eval(1, 2.0).unwrap() + (-1.0f64).exp()).abs() < 1e-15);
        assert!((ell_eval(0, 3.0).unwrap() - (-1.5f64).exp()).abs() < 1e-15);
        assert!(ell_eval(5, 400.0).unwrap().abs() < 1e-70);
    }

    #[test]
    fn lambda_values() {
        let p = LambdaParams::real(0.0, 0, 0, 0.0, 0.0).unwrap();
        assert!((lambda_eval(&p, 1.3).unwrap() - (-1.3f64).exp()).abs() < 1e-15);
        let p = LambdaParams::real(1.0, 3, 2, 0.0, 0.5).unwrap();
        assert_eq!(lambda_eval(&p, 0.0).unwrap(), 0.0);
        let p = LambdaParams::real(1.0, 1, 0, 0.0, 0.0).unwrap();
        assert_eq!(lambda_eval(&p, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn product_integral_anchors() {
        for k in 0..10 {
            let one = laguerre_product_integral(Complex64::from(0.0), 0.0, 0.0, k, k).unwrap();
            assert!((one - 1.0).norm() < 1e-12);
            let lin = laguerre_product_integral(Complex64::from(1.0), 0.0, 0.0, k, k).unwrap();
            assert!((lin - (2 * k + 1) as f64).norm() < 1e-11);
        }
        let v = laguerre_product_integral(Complex64::from(1.0), 0.0, 0.0, 0, 1).unwrap();
        assert!((v + 1.0).norm() < 1e-14);
        // ∫ e^{-x} L_1^{(1)}(x) dx = ∫ e^{-x}(2-x) dx = 1
        let v = laguerre_product_integral(Complex64::from(0.0), 1.0, 0.0, 1, 0).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
    }

    #[test]
    fn bound_constant_values() {
        let c = lambda_bound_constant(&LambdaParams::real(0.0, 0, 0, 0.0, 0.0).unwrap()).unwrap();
        assert!((c - 1.0).abs() < 1e-14);
        let c = lambda_bound_constant(&LambdaParams::real(0.0, 1, 0, 0.0, 0.0).unwrap()).unwrap();
        assert!((c - 2.0).abs() < 1e-14);
    }

    #[test]
    fn recurrence_residual() {
        for &a in &[0.0, 0.5, 2.0] {
            let basis = LaguerreBasis::new(50, a).unwrap();
            for &x in &[0.0, 0.7, 5.0, 40.0, 150.0, 200.0] {
                let l = basis.eval_all(x);
                for n in 1..50 {
                    let nf = n as f64;
                    let r = (nf + 1.0) * l[n + 1] - (2.0 * nf + 1.0 + a - x) * l[n] + (nf + a) * l[n - 1];
                    assert!(r.abs() <= 1e-10 * l[n].abs().max(1.0), "a={a} x={x} n={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn ell_orthonormal_small() {
        let gl = GaussLegendre::new(40);
        for m in 0..6 {
            for n in 0..6 {
                let v = gl.composite(|x| ell(m, x) * ell(n, x), 0.0, 120.0, 60);
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-12);
            }
        }
    }
}
