//! Symbolic-numeric toolkit for limit cycles bifurcating from the period
//! annulus of a perturbed harmonic oscillator.
//!
//! The crate is `no_std` (with `alloc`). Exact arithmetic lives in [`poly`],
//! [`trig`] and [`series`]; [`averaging`] computes averaged functions to any
//! order, [`ideals`] reduces their coefficients with Groebner bases,
//! [`bifurcate`] turns them into limit-cycle counts, [`poissonred`] builds
//! planar inputs from the Maxwell-Bloch and Euler-top Poisson systems, and
//! [`numlab`] is the independent floating-point oracle.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod averaging;
pub mod bifurcate;
pub mod error;
pub mod ideals;
pub mod numlab;
pub mod poissonred;
pub mod poly;
pub mod rat;
pub mod series;
pub mod trig;

pub use error::{Error, Result};
pub use poly::{MPoly, Monomial, MonomialOrder, OrderKind, VarSet};
pub use rat::Rat;
