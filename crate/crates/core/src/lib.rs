//! Numerical toolkit for space-time estimates of dispersive equations on the
//! torus: pseudospectral fields, divergence-free constructions, exact
//! mode-diagonal propagators, exponent arithmetic over the rationals, and
//! reproducible ratio experiments.

pub mod divfree;
pub mod error;
pub mod evolution;
pub mod exec;
pub mod experiments;
pub mod exponents;
pub mod fft;
pub mod field;
pub mod grid;
pub mod io;
pub mod multiplier;
pub mod norms;

pub use error::{Error, Result};
