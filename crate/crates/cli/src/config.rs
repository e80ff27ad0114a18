//! Suite configuration files (TOML, one `[[scenario]]` table per check).

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use schwarz_core::bochner::Barrier;
use schwarz_core::curvfun::SearchBudget;
use schwarz_core::fd::FdSteps;
use schwarz_core::holomap::MapSpec;
use schwarz_core::metrics::MetricSpec;
use schwarz_core::sampling::SampleRegion;
use schwarz_core::schwarz::ScenarioSpec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "default_suite_name")]
    pub name: String,
    pub seed: u64,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Finite-difference steps for the potential-based curvature path.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_steps: Option<FdSteps>,
    /// Default curvature search budget for scenarios that do not set one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<SearchBudget>,
    #[serde(default, rename = "scenario")]
    pub scenarios: Vec<ScenarioConfig>,
}

fn default_suite_name() -> String {
    "suite".into()
}

/// One entry of the suite, tagged by `check`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum ScenarioConfig {
    /// A Schwarz-type bound on a map between model charts.
    Theorem(ScenarioSpec),
    /// Partial trace and determinant bounds on random Hermitian pencils.
    Majorization(MajorizationConfig),
    /// Compound matrix functoriality and the singular-product norm identity.
    Compound(CompoundConfig),
    /// `Σλ⁴ ≤ U² ≤ ℓ′Σλ⁴` on random spectra.
    Sandwich(SandwichConfig),
    /// Constant-curvature structure or agreement of the finite-difference path.
    Curvature(CurvatureConfig),
    /// Closed forms of the restricted Ricci and scalar curvatures.
    Functionals(FunctionalsConfig),
    /// `∂∂̄ log` identity for one barrier at one point.
    Bochner(BochnerConfig),
    /// Quartic curvature term against its averaged bound.
    Quartic(QuarticConfig),
    /// Line Hessians of `log σ_ℓ`.
    Psh(PshConfig),
    /// Pointwise comparison of two negatively curved metrics.
    Equivalence(EquivalenceConfig),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MajorizationConfig {
    pub name: String,
    #[serde(default = "d500")]
    pub trials: usize,
    #[serde(default = "d5")]
    pub max_dim: usize,
    /// Simultaneously diagonal pairs with descending ratios, where both
    /// bounds are equalities.
    #[serde(default = "d20")]
    pub equality_trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompoundConfig {
    pub name: String,
    #[serde(default = "d200")]
    pub trials: usize,
    #[serde(default = "d4")]
    pub max_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SandwichConfig {
    pub name: String,
    #[serde(default = "d200")]
    pub trials: usize,
    #[serde(default = "d6")]
    pub max_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureMode {
    /// `R = (c/2)(g⊗g + swap)` with the model's constant `c`.
    ConstantH,
    /// Potential-based finite differences against the closed-form jet.
    FdAgreement,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureConfig {
    pub name: String,
    pub metric: MetricSpec,
    pub region: SampleRegion,
    pub mode: CurvatureMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalsConfig {
    pub name: String,
    pub metric: MetricSpec,
    pub region: SampleRegion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BochnerConfig {
    pub name: String,
    pub source: MetricSpec,
    pub target: MetricSpec,
    pub map: MapSpec,
    pub point: Vec<[f64; 2]>,
    /// Line direction in source normal coordinates; random when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<[f64; 2]>>,
    pub ell: usize,
    pub barrier: Barrier,
    /// Line step relative to the source length scale.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuarticConfig {
    pub name: String,
    pub source: MetricSpec,
    pub target: MetricSpec,
    pub map: MapSpec,
    pub point: Vec<[f64; 2]>,
    pub ell: usize,
    #[serde(default = "d100000")]
    pub samples: usize,
    /// `H^N ≤ −κ`; taken from the target model when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PshConfig {
    pub name: String,
    pub source: MetricSpec,
    pub target: MetricSpec,
    pub map: MapSpec,
    pub region: SampleRegion,
    pub ell: usize,
    #[serde(default = "d8")]
    pub lines: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceConfig {
    pub name: String,
    pub first: MetricSpec,
    pub second: MetricSpec,
    pub region: SampleRegion,
    #[serde(default = "d200")]
    pub probes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<SearchBudget>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn d4() -> usize {
    4
}
fn d5() -> usize {
    5
}
fn d6() -> usize {
    6
}
fn d8() -> usize {
    8
}
fn d20() -> usize {
    20
}
fn d200() -> usize {
    200
}
fn d500() -> usize {
    500
}
fn d100000() -> usize {
    100_000
}

impl ScenarioConfig {
    pub fn name(&self) -> &str {
        match self {
            ScenarioConfig::Theorem(s) => &s.name,
            ScenarioConfig::Majorization(s) => &s.name,
            ScenarioConfig::Compound(s) => &s.name,
            ScenarioConfig::Sandwich(s) => &s.name,
            ScenarioConfig::Curvature(s) => &s.name,
            ScenarioConfig::Functionals(s) => &s.name,
            ScenarioConfig::Bochner(s) => &s.name,
            ScenarioConfig::Quartic(s) => &s.name,
            ScenarioConfig::Psh(s) => &s.name,
            ScenarioConfig::Equivalence(s) => &s.name,
        }
    }

    pub fn check(&self) -> &'static str {
        match self {
            ScenarioConfig::Theorem(_) => "theorem",
            ScenarioConfig::Majorization(_) => "majorization",
            ScenarioConfig::Compound(_) => "compound",
            ScenarioConfig::Sandwich(_) => "sandwich",
            ScenarioConfig::Curvature(_) => "curvature",
            ScenarioConfig::Functionals(_) => "functionals",
            ScenarioConfig::Bochner(_) => "bochner",
            ScenarioConfig::Quartic(_) => "quartic",
            ScenarioConfig::Psh(_) => "psh",
            ScenarioConfig::Equivalence(_) => "equivalence",
        }
    }

    pub fn explicit_seed(&self) -> Option<u64> {
        match self {
            ScenarioConfig::Theorem(s) => s.seed,
            ScenarioConfig::Majorization(s) => s.seed,
            ScenarioConfig::Compound(s) => s.seed,
            ScenarioConfig::Sandwich(s) => s.seed,
            ScenarioConfig::Curvature(s) => s.seed,
            ScenarioConfig::Functionals(s) => s.seed,
            ScenarioConfig::Bochner(s) => s.seed,
            ScenarioConfig::Quartic(s) => s.seed,
            ScenarioConfig::Psh(s) => s.seed,
            ScenarioConfig::Equivalence(s) => s.seed,
        }
    }
}

/// Invalid configuration; the CLI exits with status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl SuiteConfig {
    /// Parses TOML text. `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        // the raw parse carries line/column information in its errors
        let raw: SuiteConfig = toml::from_str(text).map_err(|e| ConfigError(format!("{origin}: {e}")))?;
        raw.validate()?;
        if raw.budget.is_none() {
            return Ok(raw);
        }
        let mut doc: toml::Table = toml::from_str(text).map_err(|e| ConfigError(format!("{origin}: {e}")))?;
        inherit_budget(&mut doc);
        doc.try_into().map_err(|e: toml::de::Error| ConfigError(format!("{origin}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut seen = HashSet::new();
        for s in &self.scenarios {
            if s.name().is_empty() {
                return Err(ConfigError(format!("a {} scenario has an empty name", s.check())));
            }
            if !seen.insert(s.name()) {
                return Err(ConfigError(format!("duplicate scenario name {:?}", s.name())));
            }
        }
        Ok(())
    }
}

/// Copies the suite-level `budget` into theorem tables that do not set one.
fn inherit_budget(doc: &mut toml::Table) {
    let Some(budget) = doc.get("budget").cloned() else {
        return;
    };
    if let Some(toml::Value::Array(list)) = doc.get_mut("scenario") {
        for entry in list {
            if let toml::Value::Table(t) = entry {
                let is_theorem = t.get("check").and_then(|v| v.as_str()) == Some("theorem");
                if is_theorem && !t.contains_key("budget") {
                    t.insert("budget".into(), budget.clone());
                }
            }
        }
    }
}
