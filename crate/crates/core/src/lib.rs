#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod boundedness;
pub mod error;
pub mod gamma;
pub mod harness;
pub mod integrate;
pub mod laguerre;
pub mod quadrature;
pub mod special;
pub mod symbols;

pub use error::{Error, Result};
pub use symbols::{parse_symbol, Symbol};
