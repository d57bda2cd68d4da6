//! Exact multivariate polynomials over the rationals.

mod interval;
mod monomial;
mod mpoly;
mod text;
pub mod upoly;
mod varset;

pub use interval::Interval;
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub(crate) use mpoly::{divide_remainder, reduce_by_rules};
pub use mpoly::{MPoly, TermAccumulator};
pub use text::parse_bigint;
pub use upoly::UPoly;
pub use varset::VarSet;

#[cfg(test)]
mod tests;
