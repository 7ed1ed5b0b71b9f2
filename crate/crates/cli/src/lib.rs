//! Scenario-driven experiment runner: TOML scenarios in, JSON / CSV / SVG
//! reports out.

pub mod error;
pub mod gallery;
pub mod report;
pub mod runner;
pub mod scenario;
pub mod svg;

pub use error::CliError;
pub use runner::{run_scenario, write_outputs, Run};
pub use scenario::{parse_scenario, Scenario};
