//! Zariski main theorem procedures: the one-variable case, the induction
//! step, the general driver and the global form over a quasi-finiteness
//! witness.

pub mod base;
pub mod global;
pub mod main;
pub mod problem;
pub mod step;

pub use base::zmt_base;
pub use global::{verify_global, zmt_global, GlobalZmtResult, QuasiFiniteWitness};
pub use main::zmt_main;
pub use problem::{find_residual, integral_relation, verify_zmt, ZmtProblem, ZmtResult};
pub use step::{zmt_step, StepResult, StepRoute};
