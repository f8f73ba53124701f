//! Exact toolkit for standard Levi data in type D, signed-permutation
//! relative Weyl groups, extended Weyl groups inside the spin
//! representation, Clifford-theory extension checks and the combinatorial
//! "cuspidal shadow" model of the relative Weyl group layer.

pub mod chars;
pub mod clifford;
pub mod error;
pub mod group;
pub mod levi;
pub mod report;
pub mod shadow;
pub mod signed;
pub mod small;
pub mod spin;
pub mod torus;
pub mod zmod;

pub use error::{Error, Result};
