//! Command-line front end for the informative-markets toolkit: scenario
//! file parsing, command dispatch, and deterministic reporting.

pub mod commands;
pub mod report;
pub mod scenario;

pub use commands::{CliError, CommandResult, DesignArgs, DesignKind, Outcome};
pub use report::RunReport;
pub use scenario::{parse_scenario, Scenario, ScenarioDoc, ScenarioError};
