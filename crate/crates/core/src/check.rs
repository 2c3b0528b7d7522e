//! Outcome of running an identity over a list of samples.

use num_traits::Zero;
use serde::Serialize;

use crate::rational::{fmt_q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sample_index: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub checked: usize,
    pub failures: Vec<Witness>,
    /// Largest certified interval radius attached to any compared value.
    pub max_error_bound: Q,
    /// Set when a conditional check found its hypothesis unmet.
    pub skipped: Option<String>,
    /// Extra information about a run that did happen.
    pub note: Option<String>,
}

impl Default for CheckReport {
    fn default() -> Self {
        CheckReport { checked: 0, failures: Vec::new(), max_error_bound: Q::zero(), skipped: None, note: None }
    }
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn record(&mut self, sample_index: usize, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(Witness { sample_index, detail: detail() });
        }
    }

    pub fn fail(&mut self, sample_index: usize, detail: String) {
        self.checked += 1;
        self.failures.push(Witness { sample_index, detail });
    }

    pub fn bound(&mut self, e: &Q) {
        if *e > self.max_error_bound {
            self.max_error_bound = e.clone();
        }
    }

    /// Folds `other` in, keeping witnesses ordered by sample index.
    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.failures.sort_by_key(|w| w.sample_index);
        self.bound(&other.max_error_bound);
        if self.skipped.is_none() {
            self.skipped = other.skipped;
        }
        if self.note.is_none() {
            self.note = other.note;
        }
    }

    pub fn max_error_bound_str(&self) -> String {
        fmt_q(&self.max_error_bound)
    }
}
