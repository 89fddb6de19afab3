//! Boundedness decisions for Calderón–Toeplitz operators with vertical
//! symbols. Each verdict carries the measurements that justify it.
//!
//! The criteria, in the order they are tried:
//! * family rules for symbols with a known answer;
//! * divergence of the infima θ(v) = inf_{(0,v)} a or Θ(v) = inf_{(v/2,v)} a
//!   for non-negative symbols, which forces unboundedness for every k;
//! * growth of the iterated means C^{(m)}: O(v^m) at both ends gives
//!   boundedness, O(v^{m+λ₁}) at 0 with O(v^{n-λ₂}) at ∞ gives boundedness
//!   with γ → 0 at both ends.

use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::E;

use crate::error::{domain, Error, Result};
use crate::gamma::{EndpointLimit, GammaProfile};
use crate::symbols::{
    big_theta_inf, growth_of_atoms, infimum, iterated_mean, mean_of_atoms, theta_inf, Atom, Endpoint, MeanAsymptotic,
    Symbol,
};

pub const DEFAULT_MAX_MEAN_ORDER: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    BoundedAllK,
    BoundedAllKWithZeroLimits,
    UnboundedAllK,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::BoundedAllK => "bounded_all_k",
            Verdict::BoundedAllKWithZeroLimits => "bounded_all_k_with_zero_limits",
            Verdict::UnboundedAllK => "unbounded_all_k",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn is_bounded(self) -> bool {
        matches!(self, Verdict::BoundedAllK | Verdict::BoundedAllKWithZeroLimits)
    }
}

/// The criterion a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    FamilyRule,
    /// C^{(m)} = O(v^m) at 0 and at ∞
    BoundedMeans,
    /// C^{(m)} = O(v^{m+λ₁}) at 0 and C^{(n)} = O(v^{n-λ₂}) at ∞
    VanishingMeans,
    /// non-negative a (or C^{(m₀)}) with bounded γ_{a,0}
    NonnegativeLift,
    /// θ → ∞ at 0 or Θ → ∞ at ∞
    InfimumDivergence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub criterion: String,
    pub measured: BTreeMap<String, f64>,
    pub note: String,
}

impl Evidence {
    fn new(criterion: &str, note: impl Into<String>) -> Self {
        Self { criterion: criterion.to_string(), measured: BTreeMap::new(), note: note.into() }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.measured.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessVerdict {
    pub symbol: String,
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
    pub theorem_basis: Vec<Basis>,
    /// Exact operator norm when it is known (constant symbols).
    pub norm: Option<f64>,
}

impl BoundednessVerdict {
    fn new(s: &Symbol, verdict: Verdict, basis: Vec<Basis>, evidence: Vec<Evidence>) -> Self {
        Self { symbol: s.to_string(), verdict, evidence, theorem_basis: basis, norm: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}

/// Upper bound of |a| when it is evident from the expression.
fn ess_sup_bound(s: &Symbol) -> Option<f64> {
    match s {
        Symbol::Const(c) => Some(c.norm()),
        Symbol::OscExp | Symbol::Vi => Some(1.0),
        Symbol::VPow(p) if p.re == 0.0 => Some(1.0),
        // t^{-τ/α} |sin t| ≤ 1 for t = v^{-α} once τ ≤ α
        Symbol::PlainSinInvPow { alpha, tau } if tau <= alpha => Some(1.0),
        Symbol::Scale(c, inner) => ess_sup_bound(inner).map(|b| c.norm() * b),
        Symbol::Truncate { inner, .. } | Symbol::Head { inner, .. } => ess_sup_bound(inner),
        Symbol::Sum(items) => items.iter().map(ess_sup_bound).sum(),
        Symbol::Product(items) => items.iter().map(ess_sup_bound).product(),
        _ => None,
    }
}

const INFIMUM_POINTS: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];

/// θ or Θ sampled every two decades towards the endpoint; divergence means
/// strictly growing by at least 20% per step with non-shrinking increments.
fn infimum_divergence<F: Fn(f64) -> Result<f64>>(inf: F, endpoint: Endpoint) -> Result<Option<Evidence>> {
    let mut values = Vec::new();
    for &p in &INFIMUM_POINTS {
        let v = match endpoint {
            Endpoint::Zero => p,
            Endpoint::Infinity => p.recip(),
        };
        match inf(v) {
            Ok(x) => values.push((v, x)),
            Err(Error::NotNonNegative { .. } | Error::NotRealValued { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    let grows = values.windows(2).all(|w| w[1].1 >= 1.2 * w[0].1 && w[1].1 > 0.0);
    let incr: Vec<f64> = values.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let accelerating = incr.windows(2).all(|d| d[1] >= 0.99 * d[0]);
    if !(grows && accelerating) {
        return Ok(None);
    }
    let (name, note) = match endpoint {
        Endpoint::Zero => ("theta", "θ(v) = inf over (0, v) grows without bound as v → 0"),
        Endpoint::Infinity => ("big_theta", "Θ(v) = inf over (v/2, v) grows without bound as v → ∞"),
    };
    let mut ev = Evidence::new("infimum_divergence", note);
    for (v, x) in values {
        ev = ev.with(&format!("{name}({v:e})"), x);
    }
    Ok(Some(ev))
}

fn symbol_divergence(s: &Symbol) -> Result<Option<Evidence>> {
    if let Some(ev) = infimum_divergence(|v| theta_inf(s, v), Endpoint::Zero)? {
        return Ok(Some(ev));
    }
    infimum_divergence(|v| big_theta_inf(s, v), Endpoint::Infinity)
}

fn atoms_value(atoms: &[Atom], t: f64) -> Complex64 {
    atoms.iter().map(|a| a.value(t)).sum()
}

fn atoms_divergence(atoms: &[Atom]) -> Result<Option<Evidence>> {
    let f = |t: f64| atoms_value(atoms, t);
    if let Some(ev) = infimum_divergence(|v| infimum(f, 0.0, v), Endpoint::Zero)? {
        return Ok(Some(ev));
    }
    infimum_divergence(|v| infimum(f, 0.5 * v, v), Endpoint::Infinity)
}

/// Fitted mean exponents at both ends for orders 1..=max_order.
struct MeanFits {
    zero: Vec<MeanAsymptotic>,
    infinity: Vec<MeanAsymptotic>,
}

impl MeanFits {
    fn compute(atoms: &[Atom], max_order: u32) -> Result<Self> {
        let mut zero = Vec::new();
        let mut infinity = Vec::new();
        for m in 1..=max_order {
            zero.push(growth_of_atoms(atoms, m, Endpoint::Zero)?);
            infinity.push(growth_of_atoms(atoms, m, Endpoint::Infinity)?);
        }
        Ok(Self { zero, infinity })
    }
}

/// Exact power laws are compared with a rounding slack; oscillating envelopes
/// must clear the threshold by 0.1.
fn margin(fit: &MeanAsymptotic) -> f64 {
    if fit.residual < 1e-3 {
        1e-6
    } else {
        0.1
    }
}

fn usable(fit: &MeanAsymptotic) -> bool {
    !fit.inconclusive
}

/// exponent ≥ threshold (O(v^thr) at 0)
fn at_least(fit: &MeanAsymptotic, thr: f64) -> bool {
    let slack = if fit.residual < 1e-3 { -1e-6 } else { 0.1 };
    usable(fit) && (fit.exponent == f64::INFINITY || fit.exponent >= thr + slack)
}

/// exponent ≤ threshold (O(v^thr) at ∞)
fn at_most(fit: &MeanAsymptotic, thr: f64) -> bool {
    let slack = if fit.residual < 1e-3 { -1e-6 } else { 0.1 };
    usable(fit) && (fit.exponent == f64::NEG_INFINITY || fit.exponent <= thr - slack)
}

fn fit_evidence(criterion: &str, fit: &MeanAsymptotic, note: String) -> Evidence {
    let end = match fit.endpoint {
        Endpoint::Zero => "zero",
        Endpoint::Infinity => "infinity",
    };
    Evidence::new(criterion, note)
        .with("order", fit.order as f64)
        .with(&format!("exponent_at_{end}"), fit.exponent)
        .with("fit_residual", fit.residual)
}

/// C^{(m)} = O(v^m) at both ends for a single m.
fn bounded_means(fits: &MeanFits) -> Option<Vec<Evidence>> {
    for (z, i) in fits.zero.iter().zip(&fits.infinity) {
        let m = z.order as f64;
        if at_least(z, m) && at_most(i, m) {
            return Some(vec![
                fit_evidence("bounded_means", z, format!("C^({}) = O(v^{}) as v → 0", z.order, z.order)),
                fit_evidence("bounded_means", i, format!("C^({}) = O(v^{}) as v → ∞", i.order, i.order)),
            ]);
        }
    }
    None
}

/// C^{(m)} = O(v^{m+λ₁}) at 0 and C^{(n)} = O(v^{n-λ₂}) at ∞ with λ₂ < n+1.
fn vanishing_means(fits: &MeanFits) -> Option<Vec<Evidence>> {
    let at_zero = fits.zero.iter().find(|z| {
        usable(z) && (z.exponent == f64::INFINITY || z.exponent > z.order as f64 + margin(z))
    })?;
    let at_inf = fits.infinity.iter().find(|i| {
        let n = i.order as f64;
        usable(i) && i.exponent < n - margin(i) && i.exponent > -1.0 + margin(i)
    })?;
    let lambda1 = at_zero.exponent - at_zero.order as f64;
    let lambda2 = at_inf.order as f64 - at_inf.exponent;
    Some(vec![
        fit_evidence("vanishing_means", at_zero, format!("C^({}) = O(v^(m+λ₁)) as v → 0", at_zero.order))
            .with("lambda1", lambda1),
        fit_evidence("vanishing_means", at_inf, format!("C^({}) = O(v^(n-λ₂)) as v → ∞ with 0 < λ₂ < n+1", at_inf.order))
            .with("lambda2", lambda2),
    ])
}

fn family_rule(s: &Symbol) -> Result<Option<BoundednessVerdict>> {
    if let Some(c) = s.as_constant() {
        let mut v = BoundednessVerdict::new(
            s,
            Verdict::BoundedAllK,
            vec![Basis::FamilyRule],
            vec![Evidence::new("family_rule", "constant symbol: T is c times the identity").with("abs_c", c.norm())],
        );
        v.norm = Some(c.norm());
        return Ok(Some(v));
    }
    if let Some(m) = ess_sup_bound(s) {
        return Ok(Some(BoundednessVerdict::new(
            s,
            Verdict::BoundedAllK,
            vec![Basis::FamilyRule],
            vec![Evidence::new("family_rule", "bounded symbol: ‖T‖ ≤ ess-sup |a|").with("ess_sup_bound", m)],
        )));
    }
    match s {
        Symbol::VPow(p) => {
            // Re p ≠ 0 here, otherwise the symbol is bounded
            let mut evidence = vec![Evidence::new("family_rule", "γ is a constant times (2ξ)^(-p), unbounded at one end")
                .with("re_p", p.re)
                .with("im_p", p.im)];
            let modulus = Symbol::vpow(p.re)?;
            if let Some(ev) = symbol_divergence(&modulus)? {
                evidence.push(ev);
            }
            Ok(Some(BoundednessVerdict::new(s, Verdict::UnboundedAllK, vec![Basis::FamilyRule, Basis::InfimumDivergence], evidence)))
        }
        Symbol::LogPow { alpha, beta } => {
            let mut evidence = vec![Evidence::new("family_rule", "non-negative, θ(v) → ∞ as v → 0")
                .with("alpha", *alpha)
                .with("beta", *beta)];
            if let Some(ev) = symbol_divergence(s)? {
                evidence.push(ev);
            }
            Ok(Some(BoundednessVerdict::new(s, Verdict::UnboundedAllK, vec![Basis::FamilyRule, Basis::InfimumDivergence], evidence)))
        }
        Symbol::SinInvPow { alpha, beta } | Symbol::CosInvPow { alpha, beta } => {
            // smallest m₀ with m₀α > β
            let m0 = (beta / alpha).floor() as u32 + 1;
            let mut ev = Evidence::new("family_rule", format!("C^({m0}) = O(v^(m₀+λ₁)) at 0 with λ₁ = m₀α - β; decays at ∞"))
                .with("m0", m0 as f64)
                .with("lambda1", m0 as f64 * alpha - beta);
            if m0 <= crate::symbols::MAX_MEAN_ORDER {
                if let Ok(fit) = crate::symbols::mean_growth_exponent(s, m0, Endpoint::Zero) {
                    ev = ev.with("fitted_exponent_at_zero", fit.exponent).with("fit_residual", fit.residual);
                }
            }
            Ok(Some(BoundednessVerdict::new(s, Verdict::BoundedAllKWithZeroLimits, vec![Basis::FamilyRule, Basis::VanishingMeans], vec![ev])))
        }
        Symbol::Scale(c, inner) => {
            let mut v = classify_inner(inner, DEFAULT_MAX_MEAN_ORDER)?;
            v.symbol = s.to_string();
            v.norm = v.norm.map(|n| n * c.norm());
            Ok(Some(v))
        }
        _ => Ok(None),
    }
}

/// Classifies T_a^{(k)} for all k at once, trying family rules, infimum
/// divergence and mean growth in turn.
pub fn classify(s: &Symbol, max_mean_order: u32) -> Result<BoundednessVerdict> {
    if max_mean_order == 0 || max_mean_order > crate::symbols::MAX_MEAN_ORDER {
        return domain(format!("max mean order must lie in 1..={}, got {max_mean_order}", crate::symbols::MAX_MEAN_ORDER));
    }
    s.validate()?;
    classify_inner(s, max_mean_order)
}

fn classify_inner(s: &Symbol, max_mean_order: u32) -> Result<BoundednessVerdict> {
    if let Some(v) = family_rule(s)? {
        return Ok(v);
    }
    if let Some(ev) = symbol_divergence(s)? {
        return Ok(BoundednessVerdict::new(s, Verdict::UnboundedAllK, vec![Basis::InfimumDivergence], vec![ev]));
    }
    let atoms = s.atoms()?;
    // a = (phase-free part) + (oscillating part): if the oscillating part
    // gives a bounded operator and the phase-free part has divergent infima,
    // the sum is unbounded
    let (plain, oscillating): (Vec<Atom>, Vec<Atom>) = atoms.iter().cloned().partition(|a| a.phase.is_none());
    if !plain.is_empty() && !oscillating.is_empty() {
        if let Some(ev) = atoms_divergence(&plain)? {
            let fits = MeanFits::compute(&oscillating, max_mean_order)?;
            let osc = vanishing_means(&fits).or_else(|| bounded_means(&fits));
            if let Some(mut osc_ev) = osc {
                for e in &mut osc_ev {
                    e.note = format!("oscillating part: {}", e.note);
                }
                let mut evidence = vec![Evidence::new("infimum_divergence", format!("phase-free part: {}", ev.note))];
                evidence[0].measured = ev.measured;
                evidence.extend(osc_ev);
                return Ok(BoundednessVerdict::new(
                    s,
                    Verdict::UnboundedAllK,
                    vec![Basis::InfimumDivergence, Basis::BoundedMeans],
                    evidence,
                ));
            }
        }
    }
    let fits = MeanFits::compute(&atoms, max_mean_order)?;
    if let Some(ev) = vanishing_means(&fits) {
        return Ok(BoundednessVerdict::new(s, Verdict::BoundedAllKWithZeroLimits, vec![Basis::VanishingMeans], ev));
    }
    if let Some(ev) = bounded_means(&fits) {
        return Ok(BoundednessVerdict::new(s, Verdict::BoundedAllK, vec![Basis::BoundedMeans], ev));
    }
    let mut ev = Evidence::new("mean_growth", "no order up to the limit met a criterion with margin");
    for f in fits.zero.iter().chain(&fits.infinity) {
        let end = if f.endpoint == Endpoint::Zero { "zero" } else { "infinity" };
        ev = ev.with(&format!("exponent_m{}_{end}", f.order), f.exponent);
    }
    Ok(BoundednessVerdict::new(s, Verdict::Inconclusive, vec![], vec![ev]))
}

const LIFT_SAMPLES: usize = 400;

fn lift_points() -> impl Iterator<Item = f64> {
    (0..LIFT_SAMPLES).map(|j| 10f64.powf(-6.0 + 12.0 * (j as f64 + 0.5) / LIFT_SAMPLES as f64))
}

fn first_negative<F: Fn(f64) -> Result<Complex64>>(f: F) -> Result<Option<Error>> {
    for v in lift_points() {
        let z = f(v)?;
        if z.im.abs() > 1e-10 * z.re.abs().max(1.0) {
            return Ok(Some(Error::NotRealValued { v, imag: z.im }));
        }
        if z.re < 0.0 {
            return Ok(Some(Error::NotNonNegative { v, value: z.re }));
        }
    }
    Ok(None)
}

/// Lifts boundedness at k = 0 to every k for a non-negative symbol, or for a
/// symbol whose mean C^{(m₀)} is non-negative for some m₀ ≤ max order.
pub fn nonneg_lift(s: &Symbol, profile0: &GammaProfile) -> Result<BoundednessVerdict> {
    if profile0.k != 0 {
        return domain(format!("the lift needs the k = 0 profile, got k = {}", profile0.k));
    }
    let diverges = |l: &EndpointLimit| matches!(l, EndpointLimit::Divergent);
    if diverges(&profile0.limit_at_zero) || diverges(&profile0.limit_at_infinity) || !profile0.sup_estimate.is_finite() {
        let ev = Evidence::new("nonneg_lift", "γ_{a,0} diverges at an endpoint, so T^(0) is unbounded and the lift does not apply")
            .with("sup_estimate", profile0.sup_estimate);
        return Ok(BoundednessVerdict::new(s, Verdict::Inconclusive, vec![], vec![ev]));
    }
    let atoms = s.atoms()?;
    let scale = |v: f64| atoms.iter().map(|a| a.amplitude(v).norm()).sum::<f64>() * v;
    let mut m0 = None;
    let mut first_failure = None;
    for m in 0..DEFAULT_MAX_MEAN_ORDER {
        let failure = if m == 0 {
            first_negative(|v| Ok(s.value(v)))?
        } else {
            first_negative(|v| {
                let c = mean_of_atoms(&atoms, m, v, 1e-12 * scale(v) * v.powi(m as i32 - 1))?;
                // rounding noise around zero is not negativity
                let noise = 1e-9 * scale(v) * v.powi(m as i32 - 1);
                Ok(if c.re.abs() < noise { Complex64::new(0.0, c.im) } else { c })
            })?
        };
        match failure {
            None => {
                m0 = Some(m);
                break;
            }
            Some(e) if first_failure.is_none() => first_failure = Some(e),
            Some(_) => {}
        }
    }
    let Some(m0) = m0 else {
        return Err(first_failure.expect("at least one order was tried"));
    };
    // C^{(m₀+1)}(v) ≤ e sup|γ_{a,0}| v^{m₀+1}
    let constant = E * profile0.sup_estimate;
    let mut worst: f64 = 0.0;
    for v in lift_points().step_by(8) {
        let c = iterated_mean(s, m0 + 1, v, 1e-12 * scale(v) * v.powi(m0 as i32))?;
        worst = worst.max(c.re / v.powi(m0 as i32 + 1));
    }
    let ev = Evidence::new(
        "nonneg_lift",
        format!("C^({}) ≥ 0 on samples; C^({}) (v) ≤ e·sup|γ_0|·v^{}", m0, m0 + 1, m0 + 1),
    )
    .with("m0", m0 as f64)
    .with("sup_gamma0", profile0.sup_estimate)
    .with("bound_constant", constant)
    .with("max_sampled_ratio", worst);
    Ok(BoundednessVerdict::new(s, Verdict::BoundedAllK, vec![Basis::NonnegativeLift, Basis::BoundedMeans], vec![ev]))
}
