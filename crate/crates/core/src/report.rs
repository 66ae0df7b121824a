//! Shared check-report plumbing used by the verification suites.

use alloc::string::String;
use alloc::vec::Vec;

/// Outcome of a single check instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    /// Holds with equality at the certified supremum slope; the strict form
    /// holds for every admissible slope above it.
    Tight,
    Violation,
    /// Not evaluated; the reason says why (hypothesis not certified,
    /// horizon too short, out of the stated regime).
    Skipped,
    /// Evaluated, but the hypothesis could not be certified at this
    /// horizon, so the verdict is conditional.
    Conditional,
}

impl CheckStatus {
    pub fn name(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Tight => "tight",
            CheckStatus::Violation => "violation",
            CheckStatus::Skipped => "skipped",
            CheckStatus::Conditional => "conditional",
        }
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, CheckStatus::Violation)
    }
}

/// One evaluated check, named by what it verifies.
#[derive(Clone, Debug)]
pub struct CheckResult {
    /// Stable content-derived identifier, e.g. "succession" or "cycle-budget".
    pub id: &'static str,
    /// Level the check is anchored at (0 when not level-specific).
    pub level: usize,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckResult {
    pub fn new(id: &'static str, level: usize, status: CheckStatus, detail: String) -> Self {
        CheckResult { id, level, status, detail }
    }
}

pub fn count_violations(results: &[CheckResult]) -> usize {
    results.iter().filter(|r| r.status.is_violation()).count()
}

pub fn violations(results: &[CheckResult]) -> Vec<&CheckResult> {
    results.iter().filter(|r| r.status.is_violation()).collect()
}
