//! Verification suites: each check compares two independent evaluations, or
//! an evaluation against a closed form, and produces a [`VerifyReport`].
//!
//! Checks never return errors. A numerical failure inside a check becomes a
//! failing report whose notes carry the error.

use std::fmt;

use serde::Serialize;

use crate::basis::ShapeParams;
use crate::error::Error;

mod checks;
mod suites;

pub use checks::{conjecture_sweep, verify_convexity, verify_lemma_omega, verify_representation};
pub use suites::{verify_all, Lattice, Suite, VerifyProfile, VerifySummary};

/// Outcome of one check. `passed` is always `max_abs_err <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub check_name: String,
    pub params: String,
    pub grid: String,
    pub max_abs_err: f64,
    pub threshold: f64,
    pub passed: bool,
    pub notes: String,
}

impl VerifyReport {
    pub fn new(
        check_name: impl Into<String>,
        params: impl Into<String>,
        grid: impl Into<String>,
        max_abs_err: f64,
        threshold: f64,
    ) -> Self {
        Self {
            check_name: check_name.into(),
            params: params.into(),
            grid: grid.into(),
            max_abs_err,
            threshold,
            // NaN compares false, so a NaN error never passes.
            passed: max_abs_err <= threshold,
            notes: String::new(),
        }
    }

    /// A failing report for a check that could not be evaluated.
    pub fn errored(
        check_name: impl Into<String>,
        params: impl Into<String>,
        grid: impl Into<String>,
        threshold: f64,
        err: &Error,
    ) -> Self {
        Self::new(check_name, params, grid, f64::INFINITY, threshold).with_note(format!("error: {err}"))
    }

    pub fn with_note(mut self, note: impl AsRef<str>) -> Self {
        let note = note.as_ref();
        if !note.is_empty() {
            if !self.notes.is_empty() {
                self.notes.push_str("; ");
            }
            self.notes.push_str(note);
        }
        self
    }

    /// Replaces the threshold and recomputes `passed`.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self.passed = self.max_abs_err <= threshold;
        self
    }

    /// Flags parameters that lie outside the hypotheses the identities were
    /// stated under.
    pub(crate) fn with_hypothesis_note(self, sp: &ShapeParams) -> Self {
        if sp.non_integer_n() {
            self.with_note(format!("n = {} is outside stated hypotheses (non-integer)", sp.n()))
        } else {
            self
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} {:<36} err={:.3e} thr={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.check_name,
            self.params,
            self.max_abs_err,
            self.threshold
        )?;
        if !self.notes.is_empty() {
            write!(f, "  ({})", self.notes)?;
        }
        Ok(())
    }
}

/// One row of a kernel-to-spline distance sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub rho: u32,
    pub sup_dist: f64,
    pub l1_dist: f64,
    pub grid_points: usize,
}

pub(crate) fn params_string(sp: &ShapeParams, extra: &[(&str, String)]) -> String {
    let mut s = format!("c={} n={}", sp.c(), sp.n());
    for (k, v) in extra {
        s.push_str(&format!(" {k}={v}"));
    }
    s
}
