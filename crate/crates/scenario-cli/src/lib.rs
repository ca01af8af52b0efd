//! Scenario-file evaluation for qubit guessing games: JSON scenario
//! documents, built-in presets, theta sweeps, CSV emission, and a built-in
//! verification table of published values.

pub mod checks;
pub mod error;
pub mod presets;
pub mod run;
pub mod scenario;

pub use error::{CliError, Result};
pub use run::{run_evaluation, rows_to_csv, sweep_to_csv, ResultRow};
pub use scenario::{parse_scenario, ScenarioDoc};
