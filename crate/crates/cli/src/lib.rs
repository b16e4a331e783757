//! Problem files, task dispatch, certificate bundles and their re-check.

pub mod error;
pub mod execute;
pub mod problem;
pub mod report;
pub mod schema;
pub mod verify;

pub use error::CliError;
pub use execute::{execute, RunOptions};
pub use problem::{parse_problem, ProblemFile, Task};
pub use report::{emit_report, Format};
pub use schema::{parse_bundle, CertificateBundle, Verdict, BUNDLE_SCHEMA, BUNDLE_VERSION};
pub use verify::verify_bundle;
