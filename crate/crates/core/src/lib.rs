//! Resonance-method toolkit for quadratic Dirichlet L-functions.

pub mod arith;
pub mod constants;
pub mod error;
pub mod experiments;
pub mod lfunc;
pub mod resonator;
pub mod special;
pub mod summation;

pub use error::{Error, Result};
