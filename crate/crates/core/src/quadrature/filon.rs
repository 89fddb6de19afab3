//! Filon-type quadrature for ∫ h(x) e^{iσx} dx with smooth h.
//!
//! h is projected onto Legendre polynomials from Gauss–Legendre samples and
//! the oscillatory moments are taken exactly:
//! ∫_{-1}^{1} P_l(t) e^{iκt} dt = 2 i^l j_l(κ).

use num_complex::Complex64;
use std::sync::OnceLock;

use super::gauss::gauss_legendre_nodes;

/// Number of Gauss–Legendre samples per Filon panel.
pub const FILON_NODES: usize = 24;

struct Table {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// (2l+1)/2 · w_j · P_l(t_j), row-major in l
    proj: Vec<f64>,
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = FILON_NODES;
        let (nodes, weights) = gauss_legendre_nodes(n);
        let mut proj = vec![0.0; n * n];
        for (j, (&t, &w)) in nodes.iter().zip(&weights).enumerate() {
            let (mut p0, mut p1) = (1.0, t);
            for l in 0..n {
                let pl = if l == 0 { 1.0 } else { p1 };
                proj[l * n + j] = (2.0 * l as f64 + 1.0) * 0.5 * w * pl;
                if l >= 1 {
                    let lf = l as f64;
                    let p2 = ((2.0 * lf + 1.0) * t * p1 - lf * p0) / (lf + 1.0);
                    p0 = p1;
                    p1 = p2;
                }
            }
        }
        Table { nodes, weights, proj }
    })
}

/// Spherical Bessel functions j_0..j_{lmax} at x ≥ 0.
pub fn spherical_bessel(x: f64, out: &mut [f64]) {
    let lmax = out.len() - 1;
    if x < 1.0 {
        // power series: j_l(x) = x^l / (2l+1)!! Σ_r (-x²/2)^r / (r! (2l+3)(2l+5)...(2l+2r+1))
        let x2 = 0.5 * x * x;
        let mut lead = 1.0;
        for (l, o) in out.iter_mut().enumerate() {
            if l > 0 {
                lead *= x / (2 * l + 1) as f64;
            }
            let mut term = 1.0;
            let mut sum = 1.0;
            for r in 1..30 {
                term *= -x2 / (r as f64 * (2 * l + 2 * r + 1) as f64);
                sum += term;
                if term.abs() < 1e-17 * sum.abs() {
                    break;
                }
            }
            *o = lead * sum;
        }
        return;
    }
    if x > lmax as f64 {
        // upward recurrence is stable while l < x
        out[0] = x.sin() / x;
        if lmax >= 1 {
            out[1] = x.sin() / (x * x) - x.cos() / x;
        }
        for l in 1..lmax {
            out[l + 1] = (2 * l + 1) as f64 / x * out[l] - out[l - 1];
        }
        return;
    }
    // Miller's downward recurrence, normalized against j_0 or j_1
    let start = lmax + 20 + x as usize;
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    for l in (0..=start).rev() {
        if l <= lmax {
            out[l] = j;
        }
        if l == 0 {
            break;
        }
        let jm1 = (2 * l + 1) as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        if j.abs() > 1e200 {
            j *= 1e-200;
            jp1 *= 1e-200;
            for o in out.iter_mut() {
                *o *= 1e-200;
            }
        }
    }
    let j0 = x.sin() / x;
    let j1 = x.sin() / (x * x) - x.cos() / x;
    let scale = if lmax == 0 || j0.abs() >= j1.abs() { j0 / out[0] } else { j1 / out[1] };
    for o in out.iter_mut() {
        *o *= scale;
    }
}

/// Legendre coefficients of h on a panel from its values at the mapped
/// Gauss–Legendre nodes.
pub fn legendre_coefficients(values: &[Complex64; FILON_NODES]) -> [Complex64; FILON_NODES] {
    let t = table();
    let n = FILON_NODES;
    let mut c = [Complex64::new(0.0, 0.0); FILON_NODES];
    for (l, cl) in c.iter_mut().enumerate() {
        let row = &t.proj[l * n..(l + 1) * n];
        *cl = row.iter().zip(values).map(|(&p, &v)| v * p).sum();
    }
    c
}

/// Sample points of a panel [a, b].
pub fn panel_nodes(a: f64, b: f64) -> [f64; FILON_NODES] {
    let t = table();
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut x = [0.0; FILON_NODES];
    for (xi, &ti) in x.iter_mut().zip(&t.nodes) {
        *xi = m + h * ti;
    }
    x
}

/// Plain Gauss–Legendre value of the panel, for non-oscillatory use.
pub fn panel_plain(values: &[Complex64; FILON_NODES], a: f64, b: f64) -> Complex64 {
    let t = table();
    values.iter().zip(&t.weights).map(|(&v, &w)| v * w).sum::<Complex64>() * (0.5 * (b - a))
}

/// Panel outcome: integral and a resolution indicator (size of the trailing
/// Legendre coefficients relative to the leading ones).
pub struct PanelResult {
    pub value: Complex64,
    pub tail: f64,
    pub scale: f64,
}

/// ∫_a^b h(x) e^{iσx} dx from samples of h at [`panel_nodes`]`(a, b)`.
pub fn filon_panel(values: &[Complex64; FILON_NODES], a: f64, b: f64, sigma: f64) -> PanelResult {
    let c = legendre_coefficients(values);
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    let kappa = sigma * h;
    let mut j = [0.0; FILON_NODES];
    spherical_bessel(kappa.abs(), &mut j);
    let mut sum = Complex64::new(0.0, 0.0);
    // i^l with the parity of j_l under κ → -κ folded in
    let mut il = Complex64::new(1.0, 0.0);
    let flip = kappa < 0.0;
    for l in 0..FILON_NODES {
        let jl = if flip && l % 2 == 1 { -j[l] } else { j[l] };
        sum += c[l] * il * jl;
        il *= Complex64::new(0.0, 1.0);
    }
    let scale = c.iter().take(4).map(|z| z.norm()).fold(0.0, f64::max);
    let tail = c[FILON_NODES - 1].norm() + c[FILON_NODES - 2].norm() + c[FILON_NODES - 3].norm();
    PanelResult {
        value: Complex64::from_polar(2.0 * h, sigma * m) * sum,
        tail: tail * 2.0 * h.abs(),
        scale: scale * 2.0 * h.abs(),
    }
}
