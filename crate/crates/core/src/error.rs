use serde::{Deserialize, Serialize};
use std::cell::Cell;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum EngineError {
    #[error("degree cap {cap} exceeded (degree {degree})")]
    DegreeCapExceeded { cap: u64, degree: u64 },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("degenerate resultant: both inputs constant in the main variable")]
    DegenerateResultant,
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("module generators insufficient: {0}")]
    ModuleGensInsufficient(String),
    #[error("witness search exhausted: {0}")]
    WitnessSearchExhausted(String),
    #[error("not a divisor")]
    NotADivisor,
    #[error("subalgebra witness missing: {0}")]
    SubalgebraWitnessMissing(String),
    #[error("polynomial does not annihilate the element")]
    PNotAnnihilating,
    #[error("hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),
    #[error("exponent cap {cap} exceeded")]
    ExponentCapExceeded { cap: u32 },
    #[error("branch cap {cap} exceeded")]
    BranchBlowup { cap: u32 },
    #[error("membership search exhausted: {0}")]
    MembershipSearchExhausted(String),
    #[error("jacobian is not a unit")]
    JacobianNotUnit,
    #[error("invariant recheck failed: {0}")]
    InvariantRecheckFailed(String),
    #[error("zero check failed: {0}")]
    ZeroCheckFailed(String),
    #[error("linear coefficient is not a unit")]
    A1NotUnit,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl EngineError {
    /// Errors that mean "a configured cap ran out" rather than "wrong input".
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            EngineError::DegreeCapExceeded { .. }
                | EngineError::ExponentCapExceeded { .. }
                | EngineError::BranchBlowup { .. }
                | EngineError::WitnessSearchExhausted(_)
                | EngineError::MembershipSearchExhausted(_)
        )
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, EngineError::Parse { .. } | EngineError::UnknownVariable(_))
    }
}

pub type Result<T> = std::result::Result<T, EngineError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub degree: u64,
    pub exponent: u32,
    pub branch: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { degree: 512, exponent: 64, branch: 256 }
    }
}

thread_local! {
    static CAPS: Cell<Caps> = Cell::new(Caps::default());
}

impl Caps {
    pub fn current() -> Caps {
        CAPS.with(|c| c.get())
    }

    /// Run `f` with `self` installed as the thread's caps.
    pub fn scope<R>(self, f: impl FnOnce() -> R) -> R {
        let old = CAPS.with(|c| c.replace(self));
        struct Restore(Caps);
        impl Drop for Restore {
            fn drop(&mut self) {
                CAPS.with(|c| c.set(self.0));
            }
        }
        let _g = Restore(old);
        f()
    }

    pub fn check_degree(degree: u64) -> Result<()> {
        let cap = Caps::current().degree;
        if degree > cap {
            Err(EngineError::DegreeCapExceeded { cap, degree })
        } else {
            Ok(())
        }
    }
}
