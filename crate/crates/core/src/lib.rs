//! Numerics for M-harmonic function spaces on the unit ball of `Cⁿ`.

pub mod algebra;
pub mod coeffs;
pub mod error;
pub mod mh;
pub mod parallel;
pub mod quadrature;
pub mod radial;
pub mod specfun;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
