//! Verifier reports: counts, violation witnesses and a pass/fail verdict.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One failed check together with the value that failed it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub check: String,
    pub witness: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifierReport {
    pub name: String,
    pub samples_run: usize,
    pub skipped: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub seed: u64,
    pub verdict: Verdict,
    /// All violations found, including those beyond the stored witnesses.
    pub violation_total: usize,
    /// Free-form facts recorded by the check (absorption indices, diameters, ...).
    pub notes: Vec<String>,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<VerifierReport>,
}

/// Violations beyond this many are counted but not stored.
const MAX_STORED: usize = 64;

impl VerifierReport {
    pub fn new(name: impl Into<String>, tolerance: f64, seed: u64) -> Self {
        Self {
            name: name.into(),
            samples_run: 0,
            skipped: 0,
            max_error: 0.0,
            tolerance,
            seed,
            verdict: Verdict::Pass,
            violation_total: 0,
            notes: Vec::new(),
            violations: Vec::new(),
            parts: Vec::new(),
        }
    }

    /// Records an error value for the running maximum without judging it.
    pub fn observe(&mut self, err: f64) {
        if err.is_nan() {
            self.max_error = f64::NAN;
        } else if err > self.max_error {
            self.max_error = err;
        }
    }

    pub fn violation(&mut self, check: impl Into<String>, witness: impl Into<String>, value: f64) {
        self.verdict = Verdict::Fail;
        self.violation_total += 1;
        if self.violations.len() < MAX_STORED {
            self.violations.push(Violation { check: check.into(), witness: witness.into(), value });
        }
    }

    /// Records `err` and flags a violation when it exceeds `tol` (or is NaN).
    pub fn check(&mut self, check: &str, witness: impl FnOnce() -> String, err: f64, tol: f64) {
        self.observe(err);
        if !(err <= tol) {
            self.violation(check, witness(), err);
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Folds `other` into `self` as a sub-report; counts and verdicts combine.
    pub fn absorb(&mut self, other: VerifierReport) {
        self.samples_run += other.samples_run;
        self.skipped += other.skipped;
        if other.max_error.is_nan() || other.max_error > self.max_error {
            self.max_error = other.max_error;
        }
        if other.verdict == Verdict::Fail {
            self.verdict = Verdict::Fail;
        }
        self.parts.push(other);
    }

    /// Merges per-sample partial reports of the same check.
    pub fn merge(&mut self, other: VerifierReport) {
        self.samples_run += other.samples_run;
        self.skipped += other.skipped;
        self.observe(other.max_error);
        if other.verdict == Verdict::Fail {
            self.verdict = Verdict::Fail;
        }
        self.violation_total += other.violation_total;
        for v in other.violations {
            if self.violations.len() < MAX_STORED {
                self.violations.push(v);
            }
        }
        self.notes.extend(other.notes);
    }

    pub fn summary(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        format!(
            "{verdict} {}: samples={} skipped={} violations={} max_error={:.3e} tol={:.1e} seed={}",
            self.name,
            self.samples_run,
            self.skipped,
            self.violation_count(),
            self.max_error,
            self.tolerance,
            self.seed
        )
    }

    /// Violations found in this report and all of its parts.
    pub fn violation_count(&self) -> usize {
        self.violation_total + self.parts.iter().map(VerifierReport::violation_count).sum::<usize>()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_else(|e| format!("# report serialization failed: {e}\n"))
    }
}
