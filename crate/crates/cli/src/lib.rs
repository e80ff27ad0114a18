//! Batch runner for numerical Schwarz-lemma verification scenarios.
//!
//! A suite is a TOML file with a global seed and one `[[scenario]]` table
//! per check; [`runner::run_suite`] executes it and produces a
//! [`report::RunReport`].

pub mod catalog;
pub mod checks;
pub mod config;
pub mod report;
pub mod runner;

use config::SuiteConfig;

/// Source of the built-in `paper-core` suite.
pub const CORE_SUITE_TOML: &str = include_str!("../suites/paper-core.toml");

pub fn core_suite() -> SuiteConfig {
    SuiteConfig::parse(CORE_SUITE_TOML, "paper-core").expect("built-in suite parses")
}
