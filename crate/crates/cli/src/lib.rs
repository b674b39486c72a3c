//! Command-line front end for the `dilates` library: point-file parsing,
//! JSON report documents and the subcommands that produce them.

pub mod commands;
pub mod error;
pub mod pointfile;
pub mod report;

pub use commands::{run, verify_document, Cli};
pub use error::CliError;
pub use pointfile::{format_points, parse_points};
pub use report::{ReportDocument, Results};
