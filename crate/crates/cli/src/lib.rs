//! Scenario runner for the chiral-cavity simulator: configuration, CSV
//! output, truncation sweeps and oracle checks.

pub mod config;
pub mod converge;
pub mod error;
pub mod grid;
pub mod oracle;
pub mod run;

pub use config::{parse_config, ComplexArg, Scenario, ScenarioArgs, ScenarioConfig};
pub use converge::{convergence_sweep, ConvergenceReport};
pub use error::{CliError, Result};
pub use grid::run_grid;
pub use oracle::{oracle_check, OracleReport};
pub use run::{run_scenario, simulate, write_csv};
