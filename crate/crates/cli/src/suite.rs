//! Runs a suite and writes its report bundle.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use diffeo_core::{VerificationReport, EXACT_TOL};

use crate::checks::checks_for;
use crate::config::{Budgets, Fault, SuiteConfig};

/// One emitted report file: the configuration that produced it and the report.
#[derive(Debug, Serialize)]
pub struct ReportFile<'a> {
    pub suite: &'a str,
    pub seed: u64,
    pub budgets: Budgets,
    pub report: &'a VerificationReport,
}

#[derive(Debug, Serialize)]
struct SummaryEntry<'a> {
    check: &'a str,
    pass: bool,
    max_residual: f64,
    tolerance: f64,
    samples_used: usize,
    file: String,
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    suite: &'a str,
    seed: u64,
    budgets: Budgets,
    tol: Option<f64>,
    fault: Option<Fault>,
    pass: bool,
    passed: usize,
    failed: Vec<&'a str>,
    checks: Vec<SummaryEntry<'a>>,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub reports: Vec<VerificationReport>,
    pub summary_path: PathBuf,
}

impl SuiteOutcome {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.reports.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect()
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(!self.pass())
    }
}

/// Re-judges reports held to the default exact tolerance against `tol`.
pub fn apply_tolerance(mut r: VerificationReport, tol: Option<f64>) -> VerificationReport {
    match tol {
        Some(t) if r.tolerance == EXACT_TOL => {
            r.tolerance = t;
            r.finish()
        }
        _ => r,
    }
}

pub fn report_file_name(check: &str) -> String {
    let safe: String =
        check.chars().map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '_' }).collect();
    format!("{safe}.json")
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))
}

/// Runs every check of `cfg.suite` and writes one JSON per check plus `summary.json`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let checks = checks_for(&cfg.suite);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool.build().context("building worker pool")?;
    let reports: Vec<VerificationReport> =
        pool.install(|| checks.par_iter().map(|c| apply_tolerance(c.run(cfg), cfg.tol)).collect());

    let mut entries = Vec::with_capacity(reports.len());
    for r in &reports {
        let file = report_file_name(&r.check);
        let body = ReportFile { suite: &cfg.suite, seed: cfg.seed, budgets: cfg.budgets, report: r };
        write(&cfg.out.join(&file), &serde_json::to_string_pretty(&body)?)?;
        entries.push(SummaryEntry {
            check: &r.check,
            pass: r.pass,
            max_residual: r.max_residual,
            tolerance: r.tolerance,
            samples_used: r.samples_used,
            file,
        });
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect();
    let summary = Summary {
        suite: &cfg.suite,
        seed: cfg.seed,
        budgets: cfg.budgets,
        tol: cfg.tol,
        fault: cfg.fault,
        pass: failed.is_empty(),
        passed: reports.len() - failed.len(),
        failed,
        checks: entries,
    };
    let summary_path = cfg.out.join("summary.json");
    write(&summary_path, &serde_json::to_string_pretty(&summary)?)?;
    Ok(SuiteOutcome { reports, summary_path })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_override_only_touches_exact_checks() {
        let mut r = VerificationReport::new("x", EXACT_TOL);
        r.observe(1e-7, &[0.0]);
        let r = r.finish();
        assert!(!r.pass);
        assert!(apply_tolerance(r.clone(), Some(1e-6)).pass);
        let z = VerificationReport::new("z", 0.0).finish();
        assert_eq!(apply_tolerance(z.clone(), Some(1.0)).tolerance, 0.0);
    }

    #[test]
    fn file_names_are_safe() {
        assert_eq!(report_file_name("fibrancy.circle.eps0.1"), "fibrancy.circle.eps0.1.json");
        assert_eq!(report_file_name("a/b c"), "a_b_c.json");
    }
}
