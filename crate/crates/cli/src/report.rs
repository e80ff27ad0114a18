//! Run reports: one JSON object per run, records in scenario order.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::SuiteConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Hypotheses not met or sampling not decisive.
    Inconclusive,
    /// Numerical rejection while running the scenario.
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Error => "ERROR",
        }
    }
}

/// Where the numbers in a record come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Closed forms.
    Analytic,
    /// Sampled extremes and searches.
    Measured,
    /// Finite-difference estimates.
    Fd,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Record {
    pub scenario: String,
    pub check: String,
    pub status: Status,
    pub quantity: String,
    pub value: Option<f64>,
    pub bound: Option<f64>,
    /// Signed distance to the bound, nonnegative when the check holds.
    pub margin: Option<f64>,
    pub tolerance: Option<f64>,
    pub provenance: Provenance,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub error: usize,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let count = |s: Status| records.iter().filter(|r| r.status == s).count();
        Summary {
            total: records.len(),
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            inconclusive: count(Status::Inconclusive),
            error: count(Status::Error),
        }
    }

    pub fn ok(&self) -> bool {
        self.fail == 0 && self.error == 0
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Toolkit {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    /// The only wall-clock field; everything else depends on the config.
    pub generated_at: String,
    pub toolkit: Toolkit,
    pub suite: String,
    pub seed: u64,
    pub config: SuiteConfig,
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl RunReport {
    pub fn new(config: SuiteConfig, records: Vec<Record>) -> Self {
        RunReport {
            schema: SCHEMA_VERSION,
            generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            toolkit: Toolkit {
                name: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
            },
            suite: config.name.clone(),
            seed: config.seed,
            summary: Summary::of(&records),
            config,
            records,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "suite {} (seed {}), {} {}, generated {}",
            self.suite, self.seed, self.toolkit.name, self.toolkit.version, self.generated_at
        );
        let width = self.records.iter().map(|r| r.scenario.len()).max().unwrap_or(0);
        for r in &self.records {
            let _ = write!(out, "{:<12} {:<width$}  {:<12} {}", r.status.label(), r.scenario, r.check, r.quantity);
            if let (Some(v), Some(b)) = (r.value, r.bound) {
                let _ = write!(out, " = {v:.9e} vs {b:.9e}");
            }
            if let Some(m) = r.margin {
                let _ = write!(out, " (margin {m:.3e})");
            }
            if let Some(msg) = &r.message {
                let _ = write!(out, ": {msg}");
            }
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} scenarios: {} pass, {} fail, {} inconclusive, {} error",
            s.total, s.pass, s.fail, s.inconclusive, s.error
        );
        out
    }
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
