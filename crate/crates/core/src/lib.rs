//! Constructive commutative algebra over the rationals with checkable
//! integrality certificates: Gröbner-based zero tests, lying over,
//! Kronecker and Emmanuel constructions, a Zariski main theorem driver and
//! a multivariate Hensel pipeline.

pub mod crucial;
pub mod error;
pub mod hensel;
pub mod ideal;
pub mod integrality;
pub mod ring;
pub mod zmt;

pub use error::{Caps, EngineError, Result};
