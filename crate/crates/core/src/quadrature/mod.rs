//! Quadrature rules: Gauss–Legendre, Gauss–Laguerre, adaptive Gauss–Kronrod
//! and Filon panels for oscillatory integrands.

pub mod filon;
pub mod gauss;
pub mod kronrod;

pub use kronrod::Tolerance;
