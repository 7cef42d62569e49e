//! Exact-arithmetic calculator and verification harness for surgery
//! formulas on rational homology spheres: Dedekind sums, lens-space
//! correction terms, renormalized Euler characteristics of Heegaard Floer
//! homology, Casson-Walker invariants, and Reidemeister-Turaev torsion
//! cross-checks.
//!
//! Everything is computed over arbitrary-precision rationals; every
//! identity is checked for exact equality, never within a tolerance.

pub mod alexander;
pub mod cli;
mod error;
pub mod exact;
pub mod hfmodel;
pub mod lens;
pub mod surgery;

pub use error::{Error, Result};
pub use exact::Rational;
