//! Pass/fail verification records shared by every harness in the crate.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Absolute tolerance for identities that hold exactly in real arithmetic.
pub const EXACT_TOL: f64 = 1e-9;
/// Tolerance floor for automatic-differentiation vs finite-difference checks.
pub const AD_FD_TOL: f64 = 1e-6;

/// Outcome of one sampled or exhaustive check.
///
/// `pass` is always `max_residual <= tolerance`; use [`VerificationReport::finish`]
/// to keep the two consistent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub pass: bool,
    pub max_residual: f64,
    pub witness: Option<Vec<f64>>,
    pub samples_used: usize,
    pub tolerance: f64,
    /// Named side values recorded by the check (dilation factors, positivity margins, ...).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub recorded: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            pass: true,
            max_residual: 0.0,
            witness: None,
            samples_used: 0,
            tolerance,
            recorded: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Folds one residual into the running maximum, keeping the first point
    /// that attains it as the witness.
    pub fn observe(&mut self, residual: f64, point: &[f64]) {
        self.samples_used += 1;
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        if residual > self.max_residual || (self.witness.is_none() && residual > self.tolerance) {
            self.max_residual = residual;
            self.witness = Some(point.to_vec());
        }
    }

    /// Records a hard failure that has no meaningful numeric residual.
    pub fn fail(&mut self, note: impl Into<String>, point: Option<&[f64]>) {
        self.max_residual = f64::INFINITY;
        if let Some(p) = point {
            self.witness = Some(p.to_vec());
        }
        self.notes.push(note.into());
    }

    pub fn record(&mut self, key: impl Into<String>, value: f64) {
        self.recorded.insert(key.into(), value);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Merges a sub-check into this one. The sub-check's residual is rescaled
    /// from its own tolerance to this report's tolerance, so a failing child
    /// always fails the parent.
    pub fn absorb(&mut self, other: &VerificationReport) {
        self.samples_used += other.samples_used;
        let mut scaled = other.max_residual / other.tolerance.max(f64::MIN_POSITIVE) * self.tolerance;
        if !other.pass {
            scaled = scaled.max(2.0 * self.tolerance);
            self.notes.push(format!("sub-check `{}` failed", other.check));
        }
        if scaled > self.max_residual {
            self.max_residual = scaled;
            self.witness = other.witness.clone();
        }
        for (k, v) in &other.recorded {
            self.recorded.insert(format!("{}.{}", other.check, k), *v);
        }
        self.notes.extend(other.notes.iter().cloned());
    }

    pub fn finish(mut self) -> Self {
        self.pass = self.max_residual <= self.tolerance;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: max residual {:.3e} (tol {:.1e}, {} samples)",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.max_residual,
            self.tolerance,
            self.samples_used
        )?;
        if let Some(w) = &self.witness {
            if !self.pass {
                write!(f, " witness {:?}", w)?;
            }
        }
        for (k, v) in &self.recorded {
            write!(f, "\n    {k} = {v}")?;
        }
        for n in &self.notes {
            write!(f, "\n    note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_tracks_residual() {
        let mut r = VerificationReport::new("t", 1e-9);
        r.observe(1e-12, &[0.0]);
        assert!(r.clone().finish().pass);
        r.observe(1e-3, &[1.0]);
        let r = r.finish();
        assert!(!r.pass);
        assert_eq!(r.witness, Some(vec![1.0]));
        assert_eq!(r.samples_used, 2);
    }

    #[test]
    fn nan_residual_fails() {
        let mut r = VerificationReport::new("t", 1.0);
        r.observe(f64::NAN, &[2.0]);
        assert!(!r.finish().pass);
    }

    #[test]
    fn absorbing_failure_fails_parent() {
        let mut child = VerificationReport::new("child", 1e-12);
        child.observe(1e-6, &[3.0]);
        let child = child.finish();
        let mut parent = VerificationReport::new("parent", 1e-3);
        parent.absorb(&child);
        assert!(!parent.finish().pass);
    }
}
