//! Gamma function for complex arguments, Pochhammer symbols and generalized
//! binomial coefficients.

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) for complex z (Lanczos, g = 7), with reflection for Re z < 1/2.
pub fn gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (Complex64::from(PI) * z).sin();
        return Complex64::from(PI) / (s * gamma_complex(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::from(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// ln Γ(x) for real x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut s = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + s.ln()
}

/// Γ(x) for real x.
pub fn gamma(x: f64) -> f64 {
    gamma_complex(Complex64::from(x)).re
}

/// Rising factorial (x)_n = x (x+1) ... (x+n-1), evaluated as a product.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (x + j as f64))
}

/// n! as a float.
pub fn factorial(n: u32) -> f64 {
    pochhammer(1.0, n)
}

/// Generalized binomial coefficient C(a, j) for complex `a` and integer j ≥ 0,
/// computed as the falling factorial a (a-1) ... (a-j+1) / j!.
///
/// This coincides with Γ(a+1) / (Γ(j+1) Γ(a-j+1)) wherever the Gamma form is
/// finite, and takes the limiting value at negative-integer `a`.
pub fn binomial(a: Complex64, j: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..j {
        acc *= (a - i as f64) / (i + 1) as f64;
    }
    acc
}

/// Integer binomial coefficient as a float.
pub fn binomial_int(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    binomial(Complex64::from(n as f64), k).re
}
