//! Suite configuration: defaults, an optional TOML file, and flag overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const SUITES: [&str; 5] = ["simplicial", "equidef", "realization", "fibrancy", "all"];

/// Sample counts used by the suite checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    /// Samples for retraction and round-trip checks.
    pub samples: usize,
    /// Samples per map or homotopy in the pair-equivalence harness.
    pub equidef: usize,
    /// Random horn instances per dimension for the abelian filler.
    pub filler_instances: usize,
    /// Restriction samples per filler instance.
    pub filler_samples: usize,
    /// Points per expression in the differentiation corpus.
    pub ad_points: usize,
    /// Grid targets for the product-map surjectivity probe.
    pub grid: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Self { samples: 10_000, equidef: 500, filler_instances: 50, filler_samples: 1000, ad_points: 40, grid: 1000 }
    }
}

/// Deliberate corruption used to confirm that failing checks surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Flip every sign in the abelian filler's inclusion–exclusion sum.
    FillerSigns,
}

impl std::str::FromStr for Fault {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "filler-signs" => Ok(Fault::FillerSigns),
            other => bail!("unknown fault `{other}` (expected filler-signs)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    pub seed: u64,
    pub budgets: Budgets,
    /// Replaces the default tolerance of checks judged against the exact-identity tolerance.
    pub tol: Option<f64>,
    pub out: PathBuf,
    pub jobs: Option<usize>,
    pub fault: Option<Fault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: "all".into(),
            seed: 0,
            budgets: Budgets::default(),
            tol: None,
            out: PathBuf::from("reports"),
            jobs: None,
            fault: None,
        }
    }
}

/// Every field optional, as read from a config file or the command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub suite: Option<String>,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub fault: Option<Fault>,
    pub budgets: Option<Budgets>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: ConfigFile) -> ConfigFile {
        ConfigFile {
            suite: over.suite.or(self.suite),
            seed: over.seed.or(self.seed),
            budget: over.budget.or(self.budget),
            tol: over.tol.or(self.tol),
            out: over.out.or(self.out),
            jobs: over.jobs.or(self.jobs),
            fault: over.fault.or(self.fault),
            budgets: over.budgets.or(self.budgets),
        }
    }

    pub fn resolve(self) -> Result<SuiteConfig> {
        let d = SuiteConfig::default();
        let mut budgets = self.budgets.unwrap_or_default();
        if let Some(b) = self.budget {
            budgets.samples = b;
        }
        let cfg = SuiteConfig {
            suite: self.suite.unwrap_or(d.suite),
            seed: self.seed.unwrap_or(d.seed),
            budgets,
            tol: self.tol,
            out: self.out.unwrap_or(d.out),
            jobs: self.jobs,
            fault: self.fault,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if !SUITES.contains(&self.suite.as_str()) {
            bail!("unknown suite `{}` (expected one of {})", self.suite, SUITES.join(", "));
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                bail!("tolerance must be positive, got {t}");
            }
        }
        if self.jobs == Some(0) {
            bail!("--jobs must be at least 1");
        }
        Ok(())
    }
}
