//! Vertical symbols a(v): an expression tree over a fixed set of families,
//! with parsing, canonical printing, pointwise evaluation and averaging.

mod atoms;
mod means;
mod parse;

pub use atoms::{Atom, InversePhase, Phase};
pub(crate) use means::{fit_line, growth_of_atoms, mean_of_atoms};
pub use means::{
    big_theta_inf, infimum, iterated_mean, mean_growth_exponent, theta_inf, Endpoint, MeanAsymptotic, MAX_MEAN_ORDER,
};
pub use parse::parse_symbol;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::fmt;

use crate::error::{domain, Error, Result};

/// A vertical symbol, i.e. a function of v = Im ζ only.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    /// a(v) = c
    Const(Complex64),
    /// a(v) = v^p, Re p > -1
    VPow(Complex64),
    /// a(v) = e^{2iv}
    OscExp,
    /// a(v) = v^{-β} sin v^{-α}
    SinInvPow { alpha: f64, beta: f64 },
    /// a(v) = v^{-β} cos v^{-α}
    CosInvPow { alpha: f64, beta: f64 },
    /// a(v) = v^τ sin v^{-α}
    PlainSinInvPow { alpha: f64, tau: f64 },
    /// a(v) = v^{-β} ln² v^{-α}
    LogPow { alpha: f64, beta: f64 },
    /// a(v) = v^i
    Vi,
    /// zero on [0, cutoff), the inner symbol beyond
    Truncate { cutoff: f64, inner: Box<Symbol> },
    /// the inner symbol on (0, cutoff), zero beyond
    Head { cutoff: f64, inner: Box<Symbol> },
    Scale(Complex64, Box<Symbol>),
    Sum(Vec<Symbol>),
    Product(Vec<Symbol>),
}

fn param_error<T>(family: &str, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter { family: family.into(), msg: msg.into() })
}

impl Symbol {
    pub fn constant(c: impl Into<Complex64>) -> Self {
        Symbol::Const(c.into())
    }

    pub fn vpow(p: impl Into<Complex64>) -> Result<Self> {
        let s = Symbol::VPow(p.into());
        s.validate()?;
        Ok(s)
    }

    pub fn sininvpow(alpha: f64, beta: f64) -> Result<Self> {
        let s = Symbol::SinInvPow { alpha, beta };
        s.validate()?;
        Ok(s)
    }

    pub fn cosinvpow(alpha: f64, beta: f64) -> Result<Self> {
        let s = Symbol::CosInvPow { alpha, beta };
        s.validate()?;
        Ok(s)
    }

    pub fn plainsin_invpow(alpha: f64, tau: f64) -> Result<Self> {
        let s = Symbol::PlainSinInvPow { alpha, tau };
        s.validate()?;
        Ok(s)
    }

    pub fn logpow(alpha: f64, beta: f64) -> Result<Self> {
        let s = Symbol::LogPow { alpha, beta };
        s.validate()?;
        Ok(s)
    }

    pub fn truncate(cutoff: f64, inner: Symbol) -> Result<Self> {
        let s = Symbol::Truncate { cutoff, inner: Box::new(inner) };
        s.validate()?;
        Ok(s)
    }

    pub fn head(cutoff: f64, inner: Symbol) -> Result<Self> {
        let s = Symbol::Head { cutoff, inner: Box::new(inner) };
        s.validate()?;
        Ok(s)
    }

    pub fn scale(c: impl Into<Complex64>, inner: Symbol) -> Self {
        Symbol::Scale(c.into(), Box::new(inner))
    }

    /// Checks every leaf against its family's parameter domain.
    pub fn validate(&self) -> Result<()> {
        let finite = |family: &str, name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                param_error(family, format!("{name} must be finite"))
            }
        };
        match self {
            Symbol::Const(c) => {
                if !(c.re.is_finite() && c.im.is_finite()) {
                    return param_error("const", "value must be finite");
                }
            }
            Symbol::VPow(p) => {
                finite("vpow", "p", p.re)?;
                finite("vpow", "p", p.im)?;
                if !(p.re > -1.0) {
                    return param_error("vpow", format!("Re p must exceed -1 for integrability at 0, got {}", p.re));
                }
            }
            Symbol::OscExp | Symbol::Vi => {}
            Symbol::SinInvPow { alpha, beta } | Symbol::CosInvPow { alpha, beta } => {
                let family = if matches!(self, Symbol::SinInvPow { .. }) { "sininvpow" } else { "cosinvpow" };
                finite(family, "alpha", *alpha)?;
                finite(family, "beta", *beta)?;
                if !(*alpha > 0.0) {
                    return param_error(family, format!("alpha must be positive, got {alpha}"));
                }
                if !(*beta > 0.0 && *beta < 1.0) {
                    return param_error(family, format!("beta must lie in (0, 1), got {beta}"));
                }
            }
            Symbol::PlainSinInvPow { alpha, tau } => {
                finite("plainsin_invpow", "alpha", *alpha)?;
                finite("plainsin_invpow", "tau", *tau)?;
                if !(*alpha > 0.0) {
                    return param_error("plainsin_invpow", format!("alpha must be positive, got {alpha}"));
                }
                if !(*tau > 0.0) {
                    return param_error("plainsin_invpow", format!("tau must be positive, got {tau}"));
                }
            }
            Symbol::LogPow { alpha, beta } => {
                finite("logpow", "alpha", *alpha)?;
                finite("logpow", "beta", *beta)?;
                if !(*alpha > 0.0) {
                    return param_error("logpow", format!("alpha must be positive, got {alpha}"));
                }
                if !(*beta >= 0.0 && *beta <= 1.0) {
                    return param_error("logpow", format!("beta must lie in [0, 1], got {beta}"));
                }
                if *beta == 1.0 {
                    return param_error("logpow", "beta = 1 makes v^{-1} ln^2 v non-integrable at 0");
                }
            }
            Symbol::Truncate { cutoff, inner } | Symbol::Head { cutoff, inner } => {
                let family = if matches!(self, Symbol::Truncate { .. }) { "trunc" } else { "head" };
                if !(cutoff.is_finite() && *cutoff > 0.0) {
                    return param_error(family, format!("cutoff must be positive and finite, got {cutoff}"));
                }
                inner.validate()?;
            }
            Symbol::Scale(c, inner) => {
                if !(c.re.is_finite() && c.im.is_finite()) {
                    return param_error("scale", "factor must be finite");
                }
                inner.validate()?;
            }
            Symbol::Sum(items) | Symbol::Product(items) => {
                if items.is_empty() {
                    return domain("empty sum or product");
                }
                for s in items {
                    s.validate()?;
                }
            }
        }
        Ok(())
    }

    /// a(v) for v > 0.
    pub fn eval(&self, v: f64) -> Result<Complex64> {
        if !(v > 0.0) || !v.is_finite() {
            return domain(format!("symbols are evaluated at v > 0, got {v}"));
        }
        Ok(self.value(v))
    }

    /// a(v) without argument checks; v must be positive.
    pub fn value(&self, v: f64) -> Complex64 {
        match self {
            Symbol::Const(c) => *c,
            Symbol::VPow(p) => (*p * v.ln()).exp(),
            Symbol::OscExp => Complex64::from_polar(1.0, 2.0 * v),
            Symbol::SinInvPow { alpha, beta } => Complex64::from(v.powf(-beta) * v.powf(-alpha).sin()),
            Symbol::CosInvPow { alpha, beta } => Complex64::from(v.powf(-beta) * v.powf(-alpha).cos()),
            Symbol::PlainSinInvPow { alpha, tau } => Complex64::from(v.powf(*tau) * v.powf(-alpha).sin()),
            Symbol::LogPow { alpha, beta } => {
                let l = alpha * v.ln();
                Complex64::from(v.powf(-beta) * l * l)
            }
            Symbol::Vi => Complex64::from_polar(1.0, v.ln()),
            Symbol::Truncate { cutoff, inner } => {
                if v < *cutoff {
                    Complex64::new(0.0, 0.0)
                } else {
                    inner.value(v)
                }
            }
            Symbol::Head { cutoff, inner } => {
                if v < *cutoff {
                    inner.value(v)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Symbol::Scale(c, inner) => *c * inner.value(v),
            Symbol::Sum(items) => items.iter().map(|s| s.value(v)).sum(),
            Symbol::Product(items) => items.iter().map(|s| s.value(v)).product(),
        }
    }

    /// True when every value is real (imaginary parts identically zero by construction).
    pub fn is_structurally_real(&self) -> bool {
        match self {
            Symbol::Const(c) => c.im == 0.0,
            Symbol::VPow(p) => p.im == 0.0,
            Symbol::OscExp | Symbol::Vi => false,
            Symbol::SinInvPow { .. } | Symbol::CosInvPow { .. } | Symbol::PlainSinInvPow { .. } | Symbol::LogPow { .. } => true,
            Symbol::Truncate { inner, .. } | Symbol::Head { inner, .. } => inner.is_structurally_real(),
            Symbol::Scale(c, inner) => c.im == 0.0 && inner.is_structurally_real(),
            Symbol::Sum(items) | Symbol::Product(items) => items.iter().all(Symbol::is_structurally_real),
        }
    }

    /// If the symbol is c·v^p with real c and p (possibly a product of such
    /// factors), returns (c, p). Used for exact infima.
    pub fn as_real_power(&self) -> Option<(f64, f64)> {
        match self {
            Symbol::Const(c) if c.im == 0.0 => Some((c.re, 0.0)),
            Symbol::VPow(p) if p.im == 0.0 => Some((1.0, p.re)),
            Symbol::Scale(c, inner) if c.im == 0.0 => inner.as_real_power().map(|(k, p)| (c.re * k, p)),
            Symbol::Product(items) => items.iter().try_fold((1.0, 0.0), |(k, p), s| {
                s.as_real_power().map(|(k2, p2)| (k * k2, p + p2))
            }),
            _ => None,
        }
    }

    /// The constant value, if the symbol is a (scaled) constant.
    pub fn as_constant(&self) -> Option<Complex64> {
        match self {
            Symbol::Const(c) => Some(*c),
            Symbol::Scale(c, inner) => inner.as_constant().map(|k| c * k),
            Symbol::Sum(items) => items.iter().map(Symbol::as_constant).sum(),
            Symbol::Product(items) => items.iter().map(Symbol::as_constant).product(),
            _ => None,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Symbol::Sum(_) => 0,
            Symbol::Product(_) | Symbol::Scale(..) => 1,
            _ => 2,
        }
    }
}

/// Shortest round-trip decimal form of a complex literal.
pub(crate) fn format_complex(c: Complex64) -> String {
    match (c.re, c.im) {
        (re, 0.0) => format!("{re}"),
        (0.0, im) => format!("{im}i"),
        (re, im) if im < 0.0 => format!("{re}-{}i", -im),
        (re, im) => format!("{re}+{im}i"),
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, s: &Symbol, min: u8| {
            if s.precedence() < min {
                write!(f, "({s})")
            } else {
                write!(f, "{s}")
            }
        };
        match self {
            Symbol::Const(c) => write!(f, "const({})", format_complex(*c)),
            Symbol::VPow(p) => write!(f, "vpow(p={})", format_complex(*p)),
            Symbol::OscExp => write!(f, "oscexp()"),
            Symbol::SinInvPow { alpha, beta } => write!(f, "sininvpow(alpha={alpha},beta={beta})"),
            Symbol::CosInvPow { alpha, beta } => write!(f, "cosinvpow(alpha={alpha},beta={beta})"),
            Symbol::PlainSinInvPow { alpha, tau } => write!(f, "plainsin_invpow(alpha={alpha},tau={tau})"),
            Symbol::LogPow { alpha, beta } => write!(f, "logpow(alpha={alpha},beta={beta})"),
            Symbol::Vi => write!(f, "vi()"),
            Symbol::Truncate { cutoff, inner } => write!(f, "trunc(cutoff={cutoff},{inner})"),
            Symbol::Head { cutoff, inner } => write!(f, "head(cutoff={cutoff},{inner})"),
            Symbol::Scale(c, inner) => {
                if c.im == 0.0 || c.re == 0.0 {
                    write!(f, "{}*", format_complex(*c))?;
                } else {
                    write!(f, "({})*", format_complex(*c))?;
                }
                // a scale binds to a single atom, so anything composite is parenthesised
                wrap(f, inner, 2)
            }
            Symbol::Sum(items) => {
                for (i, s) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    wrap(f, s, 1)?;
                }
                Ok(())
            }
            Symbol::Product(items) => {
                for (i, s) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    // nested products and scales are parenthesised to keep the tree shape
                    wrap(f, s, 2)?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn pointwise_values() {
        let v = 0.37;
        let z = Symbol::OscExp.eval(v).unwrap();
        assert!((z - Complex64::new((2.0 * v).cos(), (2.0 * v).sin())).norm() < 1e-15);
        let z = Symbol::Vi.eval(E).unwrap();
        assert!((z - Complex64::new(1f64.cos(), 1f64.sin())).norm() < 1e-15);
        let z = Symbol::sininvpow(1.0, 0.5).unwrap().eval(1.0 / PI).unwrap();
        assert!(z.norm() < 1e-14);
        let z = Symbol::logpow(1.0, 0.0).unwrap().eval(E * E).unwrap();
        assert!((z.re - 4.0).abs() < 1e-14);
    }

    #[test]
    fn non_positive_argument_rejected() {
        assert!(Symbol::constant(1.0).eval(0.0).is_err());
        assert!(Symbol::constant(1.0).eval(-1.0).is_err());
    }

    #[test]
    fn parameter_domains() {
        assert!(Symbol::sininvpow(1.0, 1.0).is_err());
        assert!(Symbol::sininvpow(0.0, 0.5).is_err());
        assert!(Symbol::vpow(-1.0).is_err());
        assert!(Symbol::logpow(1.0, 1.5).is_err());
        assert!(Symbol::plainsin_invpow(1.0, 0.0).is_err());
        assert!(Symbol::truncate(-1.0, Symbol::Vi).is_err());
    }

    #[test]
    fn wrappers() {
        let t = Symbol::truncate(0.5, Symbol::constant(2.0)).unwrap();
        assert_eq!(t.value(0.49), Complex64::new(0.0, 0.0));
        assert_eq!(t.value(0.5), Complex64::new(2.0, 0.0));
        let h = Symbol::head(0.5, Symbol::constant(2.0)).unwrap();
        assert_eq!(h.value(0.49), Complex64::new(2.0, 0.0));
        assert_eq!(h.value(0.5), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn real_power_detection() {
        let s = Symbol::scale(0.5, Symbol::vpow(-0.25).unwrap());
        assert_eq!(s.as_real_power(), Some((0.5, -0.25)));
        assert_eq!(Symbol::OscExp.as_real_power(), None);
    }
}
