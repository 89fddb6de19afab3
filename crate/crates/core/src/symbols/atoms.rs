//! Decomposition of a symbol into a finite sum of atoms
//! coef · t^p · (ln t)^j · e^{i(ω t + c t^{-α})} restricted to an interval.
//!
//! Sines and cosines are split into complex exponentials and products are
//! expanded term by term, so every family in the tree reduces to atoms whose
//! integrals against smooth weights can be computed with phase-aware rules.

use num_complex::Complex64;

use super::Symbol;
use crate::error::{Error, Result};

/// The e^{i c t^{-α}} part of an atom's phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversePhase {
    pub alpha: f64,
    pub coef: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    /// ω in e^{iωt}
    pub linear: f64,
    pub inverse: Option<InversePhase>,
}

impl Phase {
    pub const NONE: Phase = Phase { linear: 0.0, inverse: None };

    pub fn is_none(&self) -> bool {
        self.linear == 0.0 && self.inverse.is_none()
    }

    fn combine(&self, other: &Phase) -> Result<Phase> {
        let inverse = match (self.inverse, other.inverse) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => {
                if (a.alpha - b.alpha).abs() > 1e-14 * a.alpha.max(b.alpha) {
                    return Err(Error::Unsupported(format!(
                        "products of inverse-power phases with different exponents ({} and {})",
                        a.alpha, b.alpha
                    )));
                }
                let coef = a.coef + b.coef;
                if coef == 0.0 {
                    None
                } else {
                    Some(InversePhase { alpha: a.alpha, coef })
                }
            }
        };
        Ok(Phase { linear: self.linear + other.linear, inverse })
    }

    /// Phase angle at t.
    pub fn angle(&self, t: f64) -> f64 {
        let mut a = self.linear * t;
        if let Some(inv) = self.inverse {
            a += inv.coef * t.powf(-inv.alpha);
        }
        a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub coef: Complex64,
    pub power: Complex64,
    pub log_power: u32,
    pub phase: Phase,
    /// the atom is nonzero on [lo, hi)
    pub lo: f64,
    pub hi: f64,
}

impl Atom {
    fn new(coef: Complex64, power: Complex64, log_power: u32, phase: Phase) -> Self {
        Self { coef, power, log_power, phase, lo: 0.0, hi: f64::INFINITY }
    }

    /// coef · t^p · (ln t)^j, the non-oscillating factor.
    pub fn amplitude(&self, t: f64) -> Complex64 {
        let lt = t.ln();
        let mut z = self.coef * (self.power * lt).exp();
        if self.log_power > 0 {
            z *= lt.powi(self.log_power as i32);
        }
        z
    }

    /// Value at t > 0, zero outside the support.
    pub fn value(&self, t: f64) -> Complex64 {
        if t < self.lo || t >= self.hi {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitude(t) * Complex64::from_polar(1.0, self.phase.angle(t))
    }

    fn product(&self, other: &Atom) -> Result<Atom> {
        Ok(Atom {
            coef: self.coef * other.coef,
            power: self.power + other.power,
            log_power: self.log_power + other.log_power,
            phase: self.phase.combine(&other.phase)?,
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        })
    }

    fn same_shape(&self, other: &Atom) -> bool {
        self.power == other.power
            && self.log_power == other.log_power
            && self.phase == other.phase
            && self.lo == other.lo
            && self.hi == other.hi
    }

    pub fn reaches_zero(&self) -> bool {
        self.lo == 0.0
    }

    pub fn reaches_infinity(&self) -> bool {
        self.hi == f64::INFINITY
    }
}

fn half_i() -> Complex64 {
    Complex64::new(0.0, 0.5)
}

fn inverse(alpha: f64, coef: f64) -> Phase {
    Phase { linear: 0.0, inverse: Some(InversePhase { alpha, coef }) }
}

impl Symbol {
    /// Expands the symbol into atoms with identical shapes merged and zero
    /// coefficients dropped.
    pub fn atoms(&self) -> Result<Vec<Atom>> {
        let mut raw = self.raw_atoms()?;
        let mut out: Vec<Atom> = Vec::with_capacity(raw.len());
        for a in raw.drain(..) {
            if a.lo >= a.hi {
                continue;
            }
            if let Some(b) = out.iter_mut().find(|b| b.same_shape(&a)) {
                b.coef += a.coef;
            } else {
                out.push(a);
            }
        }
        let scale = out.iter().map(|a| a.coef.norm()).fold(0.0, f64::max);
        out.retain(|a| a.coef.norm() > 1e-15 * scale);
        Ok(out)
    }

    fn raw_atoms(&self) -> Result<Vec<Atom>> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        Ok(match self {
            Symbol::Const(c) => vec![Atom::new(*c, zero, 0, Phase::NONE)],
            Symbol::VPow(p) => vec![Atom::new(one, *p, 0, Phase::NONE)],
            Symbol::OscExp => vec![Atom::new(one, zero, 0, Phase { linear: 2.0, inverse: None })],
            Symbol::Vi => vec![Atom::new(one, Complex64::new(0.0, 1.0), 0, Phase::NONE)],
            // sin x = (e^{ix} - e^{-ix}) / 2i
            Symbol::SinInvPow { alpha, beta } => vec![
                Atom::new(-half_i(), Complex64::from(-beta), 0, inverse(*alpha, 1.0)),
                Atom::new(half_i(), Complex64::from(-beta), 0, inverse(*alpha, -1.0)),
            ],
            Symbol::CosInvPow { alpha, beta } => vec![
                Atom::new(Complex64::from(0.5), Complex64::from(-beta), 0, inverse(*alpha, 1.0)),
                Atom::new(Complex64::from(0.5), Complex64::from(-beta), 0, inverse(*alpha, -1.0)),
            ],
            Symbol::PlainSinInvPow { alpha, tau } => vec![
                Atom::new(-half_i(), Complex64::from(*tau), 0, inverse(*alpha, 1.0)),
                Atom::new(half_i(), Complex64::from(*tau), 0, inverse(*alpha, -1.0)),
            ],
            // ln² v^{-α} = α² ln² v
            Symbol::LogPow { alpha, beta } => vec![Atom::new(Complex64::from(alpha * alpha), Complex64::from(-beta), 2, Phase::NONE)],
            Symbol::Truncate { cutoff, inner } => {
                let mut v = inner.raw_atoms()?;
                for a in &mut v {
                    a.lo = a.lo.max(*cutoff);
                }
                v
            }
            Symbol::Head { cutoff, inner } => {
                let mut v = inner.raw_atoms()?;
                for a in &mut v {
                    a.hi = a.hi.min(*cutoff);
                }
                v
            }
            Symbol::Scale(c, inner) => {
                let mut v = inner.raw_atoms()?;
                for a in &mut v {
                    a.coef *= c;
                }
                v
            }
            Symbol::Sum(items) => {
                let mut v = Vec::new();
                for s in items {
                    v.extend(s.raw_atoms()?);
                }
                v
            }
            Symbol::Product(items) => {
                let mut acc = vec![Atom::new(one, zero, 0, Phase::NONE)];
                for s in items {
                    let factor = s.atoms()?;
                    let mut next = Vec::with_capacity(acc.len() * factor.len());
                    for a in &acc {
                        for b in &factor {
                            next.push(a.product(b)?);
                        }
                    }
                    acc = next;
                    if acc.len() > 4096 {
                        return Err(Error::Unsupported("product expands into too many terms".into()));
                    }
                }
                acc
            }
        })
    }
}
