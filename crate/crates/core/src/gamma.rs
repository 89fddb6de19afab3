//! The spectral function γ_{a,k}(ξ) = ∫ a(v/(2ξ)) ℓ_k(v)² dv, its closed forms
//! for several families, and sampled profiles with sup and endpoint limits.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

use crate::error::{domain, Error, Result};
use crate::integrate::{integrate_atom, Weight};
use crate::laguerre::{ell, laguerre_product_integral, LaguerreBasis};
use crate::quadrature::gauss::gauss_laguerre_nodes;
use crate::symbols::{Atom, Symbol};

/// Highest supported Laguerre level.
pub const MAX_LEVEL: usize = 50;
/// Default absolute tolerance for single γ values.
pub const DEFAULT_TOL: f64 = 1e-12;

/// 2ξ ℓ_k(2ξt)² in the variable t = v/(2ξ).
struct LevelWeight {
    k: usize,
    two_xi: f64,
    end: f64,
    width: f64,
}

impl LevelWeight {
    fn new(k: usize, xi: f64, growth: f64) -> Self {
        // beyond the last zero e^{-v} L_k(v)² decays monotonically
        let basis = LaguerreBasis::new(k, 0.0).expect("alpha = 0");
        let mut v_end = (4 * k + 2) as f64;
        loop {
            let l = basis.eval(k, v_end);
            if (-v_end).exp() * l * l * v_end.powf(growth + 2.0) < 1e-18 {
                break;
            }
            v_end += 1.0;
        }
        let two_xi = 2.0 * xi;
        Self { k, two_xi, end: v_end / two_xi, width: (4.0 / (k as f64 + 1.0)).min(1.0) / two_xi }
    }
}

impl Weight for LevelWeight {
    fn value(&self, t: f64) -> f64 {
        let l = ell(self.k, self.two_xi * t);
        self.two_xi * l * l
    }
    fn panel_width(&self, _t: f64) -> f64 {
        self.width
    }
    fn end(&self) -> f64 {
        self.end
    }
    fn sup(&self) -> f64 {
        self.two_xi
    }
}

fn is_polynomial(atom: &Atom) -> Option<i32> {
    let p = atom.power;
    let full = atom.lo == 0.0 && atom.hi == f64::INFINITY;
    (full && atom.phase.is_none() && atom.log_power == 0 && p.im == 0.0 && p.re >= 0.0 && p.re.fract() == 0.0 && p.re <= 40.0)
        .then_some(p.re as i32)
}

/// ∫ coef (v/2ξ)^p e^{-v} L_k(v)² dv by Gauss–Laguerre with 2k+60 nodes.
fn polynomial_atom(atom: &Atom, degree: i32, k: usize, xi: f64) -> Complex64 {
    let (x, w) = gauss_laguerre_nodes(2 * k + 60 + degree as usize / 2);
    let basis = LaguerreBasis::new(k, 0.0).expect("alpha = 0");
    let s: f64 = x.iter().zip(&w).map(|(&xi_, &wi)| {
        let l = basis.eval(k, xi_);
        wi * l * l * xi_.powi(degree)
    }).sum();
    atom.coef * s * (2.0 * xi).powi(-degree)
}

fn check_args(k: usize, xi: f64) -> Result<()> {
    if k > MAX_LEVEL {
        return domain(format!("level k must not exceed {MAX_LEVEL}, got {k}"));
    }
    if !(xi > 0.0 && xi.is_finite()) {
        return domain(format!("ξ must be positive and finite, got {xi}"));
    }
    Ok(())
}

/// γ_{a,k}(ξ) with absolute error target `tol`.
pub fn gamma(s: &Symbol, k: usize, xi: f64, tol: f64) -> Result<Complex64> {
    check_args(k, xi)?;
    let atoms = s.atoms()?;
    gamma_atoms(&atoms, k, xi, tol)
}

fn growth(atoms: &[Atom]) -> f64 {
    atoms
        .iter()
        .filter(|a| a.hi == f64::INFINITY)
        .map(|a| a.power.re.max(0.0) + a.log_power as f64)
        .fold(0.0, f64::max)
}

pub(crate) fn gamma_atoms(atoms: &[Atom], k: usize, xi: f64, tol: f64) -> Result<Complex64> {
    let weight = LevelWeight::new(k, xi, growth(atoms));
    let share = tol / atoms.len().max(1) as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for atom in atoms {
        total += match is_polynomial(atom) {
            Some(d) => polynomial_atom(atom, d, k, xi),
            None => integrate_atom(atom, &weight, share)?,
        };
    }
    Ok(total)
}

/// Families with a closed-form γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    /// a(v) = e^{2iv}, every k
    OscExp,
    /// a(v) = v^p, every k
    VPow(Complex64),
    /// a(v) = v^i, every k
    Vi,
    /// a(v) = v^{-1/2} sin v^{-1}, k = 1 only
    SinInvPowSpecial,
}

impl ClosedForm {
    /// The closed form matching a symbol, if there is one.
    pub fn for_symbol(s: &Symbol) -> Option<Self> {
        match s {
            Symbol::OscExp => Some(ClosedForm::OscExp),
            Symbol::VPow(p) => Some(ClosedForm::VPow(*p)),
            Symbol::Vi => Some(ClosedForm::Vi),
            Symbol::SinInvPow { alpha, beta } if *alpha == 1.0 && *beta == 0.5 => Some(ClosedForm::SinInvPowSpecial),
            _ => None,
        }
    }
}

/// The reference closed form for v^{-1/2} sin v^{-1} at k = 1, taken
/// verbatim:
/// √(2π)/4 e^{-2√ξ} [(2√ξ - 8ξ) cos(2√ξ)/(2√ξ) + (3 - 2√ξ) sin(2√ξ)/(2√ξ)].
///
/// It equals ∫ a(t) ℓ_1(2ξt)² dt, i.e. γ_{a,1}(ξ)/(2ξ); the Jacobian 2ξ of
/// t = v/(2ξ) is missing. Its value at ξ → 0 is √(2π), not a(+∞) = 0.
pub fn sininvpow_transcribed(xi: f64) -> f64 {
    let r = xi.sqrt();
    let z = 2.0 * r;
    (2.0 * PI).sqrt() / 4.0 * (-z).exp() * ((z - 8.0 * xi) * z.cos() / z + (3.0 - z) * z.sin() / z)
}

/// Closed-form γ_{a,k}(ξ).
pub fn gamma_closed_form(family: ClosedForm, k: usize, xi: f64) -> Result<Complex64> {
    check_args(k, xi)?;
    match family {
        ClosedForm::OscExp => {
            // (-1)^k / (ξ - i)^{2k+1} Σ_j (-1)^j C(k,j)² ξ^{2j+1}
            let mut sum = 0.0;
            let mut c = 1.0;
            for j in 0..=k {
                if j > 0 {
                    c = c * (k + 1 - j) as f64 / j as f64;
                }
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sum += sign * c * c * xi.powi(2 * j as i32 + 1);
            }
            let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            Ok(Complex64::from(sign * sum) / Complex64::new(xi, -1.0).powi(2 * k as i32 + 1))
        }
        ClosedForm::VPow(p) => Ok(laguerre_product_integral(p, 0.0, 0.0, k, k)? * (-p * (2.0 * xi).ln()).exp()),
        ClosedForm::Vi => {
            let p = Complex64::new(0.0, 1.0);
            Ok(laguerre_product_integral(p, 0.0, 0.0, k, k)? * (-p * (2.0 * xi).ln()).exp())
        }
        ClosedForm::SinInvPowSpecial => {
            if k != 1 {
                return Err(Error::NotAvailable(format!("the v^(-1/2) sin(1/v) closed form exists only for k = 1, got k = {k}")));
            }
            Ok(Complex64::from(2.0 * xi * sininvpow_transcribed(xi)))
        }
    }
}

/// Estimated behaviour of γ at one end of the ξ axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EndpointLimit {
    Finite { value: Complex64, error: f64 },
    Oscillatory,
    Divergent,
    /// Too few grid points near the endpoint.
    Undetermined,
}

impl EndpointLimit {
    pub fn value(&self) -> Option<Complex64> {
        match self {
            EndpointLimit::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            EndpointLimit::Finite { .. } => "finite",
            EndpointLimit::Oscillatory => "oscillatory",
            EndpointLimit::Divergent => "divergent",
            EndpointLimit::Undetermined => "undetermined",
        }
    }
}

/// γ_{a,k} sampled on a logarithmic ξ grid.
#[derive(Debug, Clone, Serialize)]
pub struct GammaProfile {
    pub symbol: String,
    pub k: usize,
    pub xi_grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub sup_estimate: f64,
    pub argmax_xi: f64,
    pub limit_at_zero: EndpointLimit,
    pub limit_at_infinity: EndpointLimit,
}

impl GammaProfile {
    /// CSV with columns xi, re, im, abs at 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "xi,re,im,abs")?;
        for (x, z) in self.xi_grid.iter().zip(&self.values) {
            writeln!(out, "{x:.16e},{:.16e},{:.16e},{:.16e}", z.re, z.im, z.norm())?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }
}

/// Log-spaced grid with exact endpoints.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|j| match j {
            0 => lo,
            _ if j + 1 == points => hi,
            _ => (a + (b - a) * j as f64 / (points - 1) as f64).exp(),
        })
        .collect()
}

const DECADES_FOR_LIMIT: f64 = 2.0;
const WINDOWS: usize = 4;
/// Minimum growth of window means, per half-decade, that counts as divergence.
const DIVERGENCE_RATIO: f64 = 1.1;

/// Limit estimate from four window means over the last two decades
/// (ordered from the interior towards the endpoint).
fn endpoint_limit(xs: &[f64], vals: &[Complex64], toward_zero: bool, tol: f64) -> EndpointLimit {
    let n = xs.len();
    let span = (xs[n - 1] / xs[0]).ln();
    let seg = (DECADES_FOR_LIMIT * std::f64::consts::LN_10).min(0.5 * span);
    let width = seg / WINDOWS as f64;
    let mut means = Vec::with_capacity(WINDOWS);
    for w in 0..WINDOWS {
        // window w covers log-distance [seg - (w+1)·width, seg - w·width] from the endpoint
        let (near, far) = (seg - (w + 1) as f64 * width, seg - w as f64 * width);
        let picked: Vec<Complex64> = xs
            .iter()
            .zip(vals)
            .filter(|(x, _)| {
                let d = if toward_zero { (*x / xs[0]).ln() } else { (xs[n - 1] / *x).ln() };
                d >= near - 1e-12 && d < far + 1e-12 && !(d < near)
            })
            .map(|(_, z)| *z)
            .collect();
        if picked.is_empty() {
            return EndpointLimit::Undetermined;
        }
        means.push(picked.iter().sum::<Complex64>() / picked.len() as f64);
    }
    let d: Vec<Complex64> = means.windows(2).map(|p| p[1] - p[0]).collect();
    let thr = 10.0 * tol.max(1e-12);
    if d.iter().all(|z| z.norm() < thr) {
        return EndpointLimit::Finite { value: means[WINDOWS - 1], error: d[2].norm() };
    }
    // a fast transient may still sit in the outermost window; the three
    // nearest the endpoint agreeing is enough
    if d[1].norm() < thr && d[2].norm() < thr {
        return EndpointLimit::Finite { value: means[WINDOWS - 1], error: d[1].norm().max(d[2].norm()) };
    }
    if means.windows(2).all(|p| p[1].norm() >= DIVERGENCE_RATIO * p[0].norm()) {
        return EndpointLimit::Divergent;
    }
    let r1 = d[1] / d[0];
    let r2 = d[2] / d[1];
    if d[0].norm() > 0.0 && d[1].norm() > 0.0 && r1.norm() < 0.9 && r2.norm() < 0.9 && (r1 - r2).norm() < 0.25 {
        let tail = d[2] * r2 / (Complex64::new(1.0, 0.0) - r2);
        return EndpointLimit::Finite { value: means[WINDOWS - 1] + tail, error: tail.norm() + thr };
    }
    EndpointLimit::Oscillatory
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximisation of |γ| in log ξ on [a, b].
fn refine_max<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c.exp())?;
    let mut fd = f(d.exp())?;
    for _ in 0..40 {
        if (b - a).abs() < 1e-7 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c.exp())?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d.exp())?;
        }
    }
    Ok(if fc > fd { (c.exp(), fc) } else { (d.exp(), fd) })
}

/// γ_{a,k} on `points` log-spaced ξ in [xi_min, xi_max], with refined sup
/// and endpoint limit estimates.
pub fn gamma_profile(s: &Symbol, k: usize, xi_min: f64, xi_max: f64, points: usize, tol: f64) -> Result<GammaProfile> {
    if !(xi_min > 0.0 && xi_max > xi_min && xi_max.is_finite()) {
        return domain(format!("need 0 < xi_min < xi_max, got {xi_min}..{xi_max}"));
    }
    if points < 2 {
        return domain(format!("a profile needs at least 2 points, got {points}"));
    }
    check_args(k, xi_min)?;
    let atoms = s.atoms()?;
    let xi_grid = log_grid(xi_min, xi_max, points);
    let values = xi_grid.iter().map(|&x| gamma_atoms(&atoms, k, x, tol)).collect::<Result<Vec<_>>>()?;
    let (j, grid_max) = values
        .iter()
        .map(|z| z.norm())
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, m)| if m > acc.1 { (i, m) } else { acc });
    let lo = xi_grid[j.saturating_sub(1)].ln();
    let hi = xi_grid[(j + 1).min(points - 1)].ln();
    let (mut argmax_xi, mut sup_estimate) = (xi_grid[j], grid_max);
    if hi > lo {
        let (x, m) = refine_max(|x| Ok(gamma_atoms(&atoms, k, x, tol)?.norm()), lo, hi)?;
        if m > sup_estimate {
            argmax_xi = x;
            sup_estimate = m;
        }
    }
    let limit_at_zero = endpoint_limit(&xi_grid, &values, true, tol);
    let limit_at_infinity = endpoint_limit(&xi_grid, &values, false, tol);
    Ok(GammaProfile {
        symbol: s.to_string(),
        k,
        xi_grid,
        values,
        sup_estimate,
        argmax_xi,
        limit_at_zero,
        limit_at_infinity,
    })
}
