//! Truncated formal Dirichlet series.
//!
//! The crate provides exact and floating-point arithmetic on series
//! `sum a_n n^{-s}` known up to a finite window, the Bohr lift to sparse
//! polynomials in one variable per prime, the action of permutations of the
//! prime indices, invariant projections by orbit averaging, and numerical
//! tools (torus and line suprema, seminorm profiles, coefficient recovery).

pub mod analysis;
pub mod arith;
pub mod bohr;
pub mod error;
pub mod group;
pub mod primes;
pub mod random;

pub use error::{Error, Result};
