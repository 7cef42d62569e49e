//! Command-line front end: problem-file parsing, subcommand dispatch,
//! verification suites, and report emission.

pub mod problem;
pub mod report;
pub mod suites;

mod run;

pub use run::run;
