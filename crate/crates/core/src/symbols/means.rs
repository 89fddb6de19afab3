//! Iterated means C^{(m)}(v), infima θ(v), Θ(v), and growth exponents of the
//! means at the endpoints.

use num_complex::Complex64;
use serde::Serialize;

use super::{Atom, Symbol};
use crate::error::{domain, Error, Result};
use crate::integrate::{integrate_atom, Weight};
use crate::special::factorial;

pub const MAX_MEAN_ORDER: u32 = 6;

/// Cauchy kernel (v - t)^{m-1} / (m-1)! on (0, v).
struct MeanKernel {
    v: f64,
    m: u32,
    norm: f64,
}

impl MeanKernel {
    fn new(v: f64, m: u32) -> Self {
        Self { v, m, norm: factorial(m - 1).recip() }
    }
}

impl Weight for MeanKernel {
    fn value(&self, t: f64) -> f64 {
        if t >= self.v {
            0.0
        } else {
            (self.v - t).powi(self.m as i32 - 1) * self.norm
        }
    }
    fn panel_width(&self, _t: f64) -> f64 {
        self.v
    }
    fn end(&self) -> f64 {
        self.v
    }
    fn sup(&self) -> f64 {
        self.v.powi(self.m as i32 - 1) * self.norm
    }
}

/// v^m Σ_r z^r/(m+r)!, i.e. the m-th iterated integral of e^{z t/v} at v.
fn exp_mean(z: Complex64, m: u32, v: f64) -> Complex64 {
    let vm = v.powi(m as i32);
    if z.norm() <= 8.0 {
        let mut term = Complex64::from(factorial(m).recip());
        let mut sum = term;
        for r in 1..200 {
            term *= z / (m + r) as f64;
            sum += term;
            if term.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        sum * vm
    } else {
        let mut partial = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for j in 0..m {
            if j > 0 {
                term *= z / j as f64;
            }
            partial += term;
        }
        (z.exp() - partial) * vm / z.powi(m as i32)
    }
}

fn atom_mean(atom: &Atom, m: u32, v: f64, abs_tol: f64) -> Result<Complex64> {
    if atom.lo == 0.0 && atom.power.re <= -1.0 {
        return Err(Error::Integrability(format!("t^{} is not integrable at 0", atom.power.re)));
    }
    let full = atom.lo == 0.0 && atom.hi >= v;
    if full && atom.log_power == 0 && atom.phase.is_none() {
        let denom: Complex64 = (1..=m).map(|j| atom.power + j as f64).product();
        return Ok(atom.coef * (atom.power * v.ln()).exp() * v.powi(m as i32) / denom);
    }
    if full && atom.log_power == 0 && atom.power == Complex64::new(0.0, 0.0) && atom.phase.inverse.is_none() {
        let z = Complex64::new(0.0, atom.phase.linear * v);
        return Ok(atom.coef * exp_mean(z, m, v));
    }
    integrate_atom(atom, &MeanKernel::new(v, m), abs_tol)
}

/// C^{(m)}(v) = ∫_0^v (v - t)^{m-1} a(t) dt / (m-1)!, the m-fold iterated
/// integral of a from 0, with absolute error target `tol`.
pub fn iterated_mean(s: &Symbol, m: u32, v: f64, tol: f64) -> Result<Complex64> {
    if m == 0 || m > MAX_MEAN_ORDER {
        return domain(format!("mean order must lie in 1..={MAX_MEAN_ORDER}, got {m}"));
    }
    if !(v > 0.0 && v.is_finite()) {
        return domain(format!("means are evaluated at v > 0, got {v}"));
    }
    mean_of_atoms(&s.atoms()?, m, v, tol)
}

pub(crate) fn mean_of_atoms(atoms: &[Atom], m: u32, v: f64, tol: f64) -> Result<Complex64> {
    let share = tol / atoms.len().max(1) as f64;
    atoms.iter().map(|a| atom_mean(a, m, v, share)).sum()
}

/// Magnitude scale of C^{(m)}(v) used to set absolute tolerances.
fn mean_scale(atoms: &[Atom], m: u32, v: f64) -> f64 {
    let lv = v.ln().abs().max(1.0);
    atoms
        .iter()
        .map(|a| a.coef.norm() * v.powf(a.power.re + m as f64) * lv.powi(a.log_power as i32) / (a.power.re + 1.0).max(1e-3))
        .sum::<f64>()
        .max(f64::MIN_POSITIVE)
}

/// Which end of the half-line an asymptotic statement refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Zero,
    Infinity,
}

/// Fitted growth exponent of |C^{(m)}| near an endpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanAsymptotic {
    pub order: u32,
    pub endpoint: Endpoint,
    pub exponent: f64,
    /// Known analytically for single phase-free power atoms.
    pub leading_coefficient: Option<Complex64>,
    /// RMS residual of the log-log fit.
    pub residual: f64,
    pub inconclusive: bool,
    /// (v, |C^{(m)}(v)|) envelope points used in the fit.
    pub samples: Vec<(f64, f64)>,
}

const HALF_DECADES: usize = 8;
const POINTS_PER_HALF_DECADE: usize = 16;
const RESIDUAL_LIMIT: f64 = 0.15;

/// Least-squares slope and RMS residual of y against x.
pub(crate) fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum::<f64>() / n).sqrt();
    (slope, intercept, rms)
}

/// Slope of log |C^{(m)}(v)| against log v on v ∈ [1e-6, 1e-2] (zero) or
/// [1e2, 1e6] (infinity), using the maximum over each half-decade so that
/// oscillating means are fitted by their envelope.
pub fn mean_growth_exponent(s: &Symbol, m: u32, endpoint: Endpoint) -> Result<MeanAsymptotic> {
    growth_of_atoms(&s.atoms()?, m, endpoint)
}

pub(crate) fn growth_of_atoms(atoms: &[Atom], m: u32, endpoint: Endpoint) -> Result<MeanAsymptotic> {
    if m == 0 || m > MAX_MEAN_ORDER {
        return domain(format!("mean order must lie in 1..={MAX_MEAN_ORDER}, got {m}"));
    }
    let start = match endpoint {
        Endpoint::Zero => -6.0,
        Endpoint::Infinity => 2.0,
    };
    let mut samples = Vec::with_capacity(HALF_DECADES);
    for h in 0..HALF_DECADES {
        let mut best = (0.0, 0.0);
        for j in 0..POINTS_PER_HALF_DECADE {
            let e = start + 0.5 * (h as f64 + (j as f64 + 0.5) / POINTS_PER_HALF_DECADE as f64);
            let v = 10f64.powf(e);
            let tol = 1e-14 * mean_scale(atoms, m, v);
            let c = mean_of_atoms(atoms, m, v, tol)?.norm();
            if !c.is_finite() {
                return Err(Error::Integrability(format!("non-finite mean at v = {v}")));
            }
            if c > best.1 || j == 0 {
                best = (v, c);
            }
        }
        samples.push(best);
    }
    let leading_coefficient = match atoms {
        [a] if a.phase.is_none() && a.log_power == 0 && a.lo == 0.0 && a.hi.is_infinite() => {
            Some(a.coef / (1..=m).map(|j| a.power + j as f64).product::<Complex64>())
        }
        _ => None,
    };
    let nonzero: Vec<_> = samples.iter().filter(|(_, c)| *c > 0.0).copied().collect();
    if nonzero.len() < 3 {
        // the mean vanishes identically near this endpoint
        let exponent = match endpoint {
            Endpoint::Zero => f64::INFINITY,
            Endpoint::Infinity => f64::NEG_INFINITY,
        };
        return Ok(MeanAsymptotic { order: m, endpoint, exponent, leading_coefficient, residual: 0.0, inconclusive: false, samples });
    }
    let x: Vec<f64> = nonzero.iter().map(|(v, _)| v.ln()).collect();
    let y: Vec<f64> = nonzero.iter().map(|(_, c)| c.ln()).collect();
    let (slope, _, rms) = fit_line(&x, &y);
    Ok(MeanAsymptotic {
        order: m,
        endpoint,
        exponent: slope,
        leading_coefficient,
        residual: rms,
        inconclusive: rms > RESIDUAL_LIMIT || !slope.is_finite(),
        samples,
    })
}

const INF_SAMPLES: usize = 512;
const INF_ROUNDS: usize = 3;

fn checked_real(v: f64, z: Complex64) -> Result<f64> {
    if z.im.abs() > 1e-10 * z.re.abs().max(1.0) {
        return Err(Error::NotRealValued { v, imag: z.im });
    }
    if z.re < 0.0 {
        return Err(Error::NotNonNegative { v, value: z.re });
    }
    Ok(z.re)
}

/// Infimum of a real non-negative function over the open interval (lo, hi)
/// by log-spaced sampling with local refinement. Negative or complex values
/// are reported as errors naming the sample.
pub fn infimum<F: Fn(f64) -> Complex64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    if !(hi > lo && lo >= 0.0) {
        return domain(format!("empty interval ({lo}, {hi})"));
    }
    let first = if lo > 0.0 { lo } else { hi * 1e-12 };
    let (mut a, mut b) = (first, hi);
    let mut best = f64::INFINITY;
    for _ in 0..=INF_ROUNDS {
        let (la, lb) = (a.ln(), b.ln());
        let pts: Vec<f64> = (0..INF_SAMPLES)
            .map(|j| (la + (lb - la) * (j as f64 + 0.5) / INF_SAMPLES as f64).exp())
            .collect();
        let mut arg = 0;
        for (j, &t) in pts.iter().enumerate() {
            let val = checked_real(t, f(t))?;
            if val < best {
                best = val;
                arg = j;
            }
        }
        a = if arg == 0 { a } else { pts[arg - 1] };
        b = if arg + 1 == INF_SAMPLES { b } else { pts[arg + 1] };
        if b <= a {
            break;
        }
    }
    Ok(best)
}

fn power_infimum(c: f64, p: f64, lo: f64, hi: f64) -> Result<f64> {
    if c < 0.0 {
        return Err(Error::NotNonNegative { v: hi, value: c * hi.powf(p) });
    }
    Ok(if c == 0.0 || p == 0.0 {
        c
    } else if p > 0.0 {
        if lo == 0.0 {
            0.0
        } else {
            c * lo.powf(p)
        }
    } else {
        c * hi.powf(p)
    })
}

/// θ(v) = inf_{t ∈ (0, v)} a(t).
pub fn theta_inf(s: &Symbol, v: f64) -> Result<f64> {
    if !(v > 0.0) {
        return domain(format!("θ is evaluated at v > 0, got {v}"));
    }
    match s.as_real_power() {
        Some((c, p)) => power_infimum(c, p, 0.0, v),
        None => infimum(|t| s.value(t), 0.0, v),
    }
}

/// Θ(v) = inf_{t ∈ (v/2, v)} a(t).
pub fn big_theta_inf(s: &Symbol, v: f64) -> Result<f64> {
    if !(v > 0.0) {
        return domain(format!("Θ is evaluated at v > 0, got {v}"));
    }
    match s.as_real_power() {
        Some((c, p)) => power_infimum(c, p, 0.5 * v, v),
        None => infimum(|t| s.value(t), 0.5 * v, v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::kronrod::{integrate, Tolerance};

    #[test]
    fn analytic_means() {
        let one = Symbol::constant(1.0);
        for m in 1..=6 {
            let z = iterated_mean(&one, m, 2.5, 1e-14).unwrap();
            assert!((z.re - 2.5f64.powi(m as i32) / factorial(m)).abs() < 1e-13);
        }
        let s = Symbol::vpow(0.5).unwrap();
        let z = iterated_mean(&s, 1, 3.0, 1e-14).unwrap();
        assert!((z.re - 3f64.powf(1.5) / 1.5).abs() < 1e-13);
        // ∫_0^v e^{2it} dt = (e^{2iv} - 1)/2i, on both sides of the series switch
        for &v in &[0.3, 3.9, 4.1, 40.0] {
            let z = iterated_mean(&Symbol::OscExp, 1, v, 1e-14).unwrap();
            let exact = (Complex64::new(0.0, 2.0 * v).exp() - 1.0) / Complex64::new(0.0, 2.0);
            assert!((z - exact).norm() < 1e-13);
        }
    }

    #[test]
    fn order_bounds() {
        assert!(iterated_mean(&Symbol::Vi, 0, 1.0, 1e-10).is_err());
        assert!(iterated_mean(&Symbol::Vi, 7, 1.0, 1e-10).is_err());
        assert!(iterated_mean(&Symbol::Vi, 1, 0.0, 1e-10).is_err());
    }

    #[test]
    fn non_integrable_product_detected() {
        let s = Symbol::Product(vec![Symbol::vpow(-0.6).unwrap(), Symbol::vpow(-0.6).unwrap()]);
        assert!(matches!(iterated_mean(&s, 1, 1.0, 1e-10), Err(Error::Integrability(_))));
    }

    #[test]
    fn sininvpow_first_mean_asymptotics() {
        // C(v) = v^{3/2} cos(1/v) + O(v^{5/2})
        let s = Symbol::sininvpow(1.0, 0.5).unwrap();
        for &v in &[1e-3, 3e-4, 1e-4] {
            let z = iterated_mean(&s, 1, v, 1e-18).unwrap();
            let lead = v.powf(1.5) * (1.0 / v).cos();
            assert!((z.re - lead).abs() < 2.0 * v.powf(2.5), "v={v}: {} vs {lead}", z.re);
        }
    }

    /// ∫_{t_c}^v C^{(m)}(t) dt and a bound for the omitted piece over (0, t_c).
    fn nested(s: &Symbol, m: u32, v: f64, t_c: f64) -> (Complex64, f64) {
        let part = integrate(
            |x| {
                let t = v * (-x).exp();
                iterated_mean(s, m, t, 1e-16).unwrap() * t
            },
            0.0,
            (v / t_c).ln(),
            Tolerance::new(1e-12, 1e-10),
        )
        .unwrap()
        .value;
        let sup = (1..=50)
            .map(|j| iterated_mean(s, m, t_c * j as f64 / 50.0, 1e-16).unwrap().norm())
            .fold(0.0, f64::max);
        (part, 2.0 * t_c * sup)
    }

    #[test]
    fn redundancy_between_orders() {
        for s in [
            Symbol::constant(1.0),
            Symbol::vpow(-0.3).unwrap(),
            Symbol::OscExp,
            Symbol::Vi,
            Symbol::sininvpow(1.0, 0.5).unwrap(),
            Symbol::plainsin_invpow(2.0, 0.5).unwrap(),
            Symbol::logpow(1.0, 0.5).unwrap(),
        ] {
            // oscillation at 0 makes the outer quadrature expensive, so the
            // innermost piece is bounded instead of integrated
            let t_c = s
                .atoms()
                .unwrap()
                .iter()
                .filter_map(|a| a.phase.inverse)
                .map(|p| (p.coef.abs() / 1e3).powf(1.0 / p.alpha))
                .fold(1e-14, f64::max);
            for m in 1..=3 {
                let v = 0.7;
                let direct = iterated_mean(&s, m + 1, v, 1e-15).unwrap();
                let (via, omitted) = nested(&s, m, v, t_c);
                assert!(
                    (direct - via).norm() <= omitted + 1e-9 * direct.norm().max(1e-2),
                    "{s} m={m}: {direct} vs {via} (omitted ≤ {omitted:e})"
                );
            }
        }
    }

    #[test]
    fn infima() {
        assert_eq!(theta_inf(&Symbol::constant(3.0), 2.0).unwrap(), 3.0);
        assert_eq!(big_theta_inf(&Symbol::constant(3.0), 2.0).unwrap(), 3.0);
        let c1 = Symbol::scale(0.5, Symbol::vpow(-0.25).unwrap());
        let v: f64 = 0.01;
        assert!((theta_inf(&c1, v).unwrap() - 0.5 / v.powf(0.25)).abs() < 1e-14);
        assert_eq!(theta_inf(&Symbol::vpow(1.0).unwrap(), 5.0).unwrap(), 0.0);
        assert!((big_theta_inf(&Symbol::vpow(1.0).unwrap(), 5.0).unwrap() - 2.5).abs() < 1e-14);
        // sampled path: logpow is decreasing near 0 for v < e^{-2/β}
        let s = Symbol::logpow(1.0, 0.5).unwrap();
        let th = theta_inf(&s, 1e-4).unwrap();
        let exact = s.value(1e-4).re;
        assert!(th <= exact * (1.0 + 1e-9) && th > 0.999 * exact);
    }

    #[test]
    fn infimum_rejects_negative_and_complex() {
        assert!(matches!(theta_inf(&Symbol::sininvpow(1.0, 0.5).unwrap(), 1.0), Err(Error::NotNonNegative { .. })));
        assert!(matches!(theta_inf(&Symbol::OscExp, 1.0), Err(Error::NotRealValued { .. })));
        assert!(matches!(theta_inf(&Symbol::constant(-1.0), 1.0), Err(Error::NotNonNegative { .. })));
    }

    #[test]
    fn growth_exponents() {
        let fit = mean_growth_exponent(&Symbol::constant(1.0), 1, Endpoint::Zero).unwrap();
        assert!((fit.exponent - 1.0).abs() < 0.05 && !fit.inconclusive);
        let fit = mean_growth_exponent(&Symbol::vpow(0.5).unwrap(), 1, Endpoint::Infinity).unwrap();
        assert!((fit.exponent - 1.5).abs() < 0.05);
        assert!((fit.leading_coefficient.unwrap().re - 1.0 / 1.5).abs() < 1e-14);
    }
}
