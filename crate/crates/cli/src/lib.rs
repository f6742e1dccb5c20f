//! File formats and the `jordan-wlcp` command-line tool for weighted
//! horizontal LCPs over Euclidean Jordan algebras.
//!
//! The numerical work lives in [`jordan_wlcp_core`]; this crate adds JSON
//! instances and reports, seeded instance generators, invariant checks and
//! thread-parallel multi-start solves.

pub mod checks;
pub mod cli;
pub mod error;
pub mod generate;
pub mod instance;
pub mod parallel;
pub mod report;

pub use cli::run;
pub use error::{CliError, Result};
pub use instance::{parse_instance, InstanceFile};
pub use report::ReportFile;
