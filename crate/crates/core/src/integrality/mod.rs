//! Integral-dependence certificates and the lemmas that produce them.

pub mod cert;
pub mod emmanuel;
pub mod glue;
pub mod kronecker;
pub mod lying_over;
pub mod shift;
pub mod tower;

pub use cert::{require_verified, verify_cert, CertFailure, CoefficientLocation, IntegralityCertificate};
pub use emmanuel::{basic_emmanuel, emmanuel, EmmanuelRing, EmmanuelSequence};
pub use glue::{glue, GlueResult};
pub use kronecker::{gauss_joyal, kronecker_cert, SplittingAlgebra};
pub use lying_over::{lying_over_cert, lying_over_unit, LyingOver, UnitExpression};
pub use shift::{shift_cert, ShiftResult};
pub use tower::{certify_expression, Tower};
