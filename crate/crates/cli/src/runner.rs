//! Executes a suite: scenarios in parallel, records in config order.

use rayon::prelude::*;
use schwarz_core::sampling::derive_seed;
use schwarz_core::Error;

use crate::checks;
use crate::config::{ScenarioConfig, SuiteConfig};
use crate::report::{Provenance, Record, RunReport, Status};

/// Seed of one scenario: its own, or derived from the suite seed and name.
pub fn scenario_seed(suite: &SuiteConfig, scn: &ScenarioConfig) -> u64 {
    scn.explicit_seed().unwrap_or_else(|| derive_seed(suite.seed, scn.name()))
}

pub fn run_scenario(suite: &SuiteConfig, scn: &ScenarioConfig) -> Record {
    let seed = scenario_seed(suite, scn);
    let result = match scn {
        ScenarioConfig::Theorem(s) => checks::theorem(s, seed),
        ScenarioConfig::Majorization(s) => checks::majorization(s, seed),
        ScenarioConfig::Compound(s) => checks::compound(s, seed),
        ScenarioConfig::Sandwich(s) => checks::sandwich(s, seed),
        ScenarioConfig::Curvature(s) => checks::curvature_check(s, seed, suite.fd_steps),
        ScenarioConfig::Functionals(s) => checks::functionals(s, seed),
        ScenarioConfig::Bochner(s) => checks::bochner(s, seed),
        ScenarioConfig::Quartic(s) => checks::quartic(s, seed),
        ScenarioConfig::Psh(s) => checks::psh(s, seed),
        ScenarioConfig::Equivalence(s) => checks::equivalence(s, seed, suite.budget),
    };
    let (scenario, check) = (scn.name().to_string(), scn.check().to_string());
    match result {
        Ok(o) => Record {
            scenario,
            check,
            status: o.status,
            quantity: o.quantity,
            value: Some(o.value),
            bound: Some(o.bound),
            margin: Some(o.margin),
            tolerance: Some(o.tolerance),
            provenance: o.provenance,
            seed,
            message: o.message,
            detail: o.detail,
        },
        Err(e) => {
            // unmet hypotheses are not failures of the inequality
            let status = match e {
                Error::Precondition(_) | Error::Degenerate(_) => Status::Inconclusive,
                _ => Status::Error,
            };
            Record {
                scenario,
                check,
                status,
                quantity: "none".into(),
                value: None,
                bound: None,
                margin: None,
                tolerance: None,
                provenance: Provenance::Measured,
                seed,
                message: Some(e.to_string()),
                detail: serde_json::Value::Null,
            }
        }
    }
}

/// Runs every scenario on a pool of `jobs` workers (all cores when `None`).
pub fn run_suite(config: SuiteConfig, jobs: Option<usize>) -> RunReport {
    let run = |cfg: &SuiteConfig| -> Vec<Record> { cfg.scenarios.par_iter().map(|s| run_scenario(cfg, s)).collect() };
    let records = match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| run(&config)),
            Err(_) => run(&config),
        },
        None => run(&config),
    };
    RunReport::new(config, records)
}
