//! Named identities run over seeded samples, grouped into suites, with a
//! deterministic JSON report.

mod central;
mod chains;
mod cochains;
mod context;
mod kernel;
mod qm;
mod spectral;
mod theta;

use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::check::{CheckReport, Witness};
use crate::error::{Error, Result};
use crate::extension::fixtures;
use crate::group::{FiniteGroup, FreeGroup};
use crate::quasimorphism::{DEFAULT_NMAX, DEFAULT_WINDOW};
use crate::rational::{fmt_q, Q};
use crate::sampling::{substream, Rng};

pub use chains::chain_checks;
pub use cochains::cochain_checks;
pub use kernel::{kernel_checks, kernel_spec_checks};
pub use qm::qm_checks;
pub use spectral::spectral_checks;

use context::{check_fixture_name, semidirect_ctx, swap_ctx};
pub use context::FIXTURES;

/// Knobs shared by every check. Sample counts default per identity; a global
/// override shrinks or grows all of them at once.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub fixture: String,
    pub seed: u64,
    pub cutoff: u32,
    pub window: usize,
    pub n_max: usize,
    pub words: Vec<String>,
    pub samples: Option<usize>,
    pub budget_mb: usize,
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            fixture: "f2-semidirect-z".to_string(),
            seed: 42,
            cutoff: 12,
            window: DEFAULT_WINDOW,
            n_max: DEFAULT_NMAX,
            words: ["ab", "abb", "aba'"].iter().map(|s| s.to_string()).collect(),
            samples: None,
            budget_mb: crate::spectral::budget_mb(),
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn n(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    /// Stream for the check called `name`, independent of which other checks run.
    pub fn rng_for(&self, name: &str) -> Rng {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in name.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x100000001b3);
        }
        substream(self.seed, h)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub identity: String,
    pub equation: String,
    pub triples_checked: usize,
    pub failures: Vec<Witness>,
    pub max_error_bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl IdentityResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn from_report(identity: &str, equation: &str, r: CheckReport) -> Self {
        IdentityResult {
            identity: identity.to_string(),
            equation: equation.to_string(),
            triples_checked: r.checked,
            max_error_bound: r.max_error_bound_str(),
            failures: r.failures,
            skipped: r.skipped,
            note: r.note,
            wall_ms: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub fixture: String,
    pub seed: u64,
    pub cutoff: u32,
    pub passed: bool,
    pub results: Vec<IdentityResult>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failed(&self) -> impl Iterator<Item = &IdentityResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

/// Verdict on one sample.
pub(crate) struct Outcome {
    failure: Option<String>,
    bound: Q,
}

impl Outcome {
    pub(crate) fn ok() -> Self {
        Outcome { failure: None, bound: Q::zero() }
    }

    pub(crate) fn check(ok: bool, detail: impl FnOnce() -> String) -> Self {
        Outcome { failure: (!ok).then(detail), bound: Q::zero() }
    }

    pub(crate) fn with_bound(mut self, b: Q) -> Self {
        self.bound = b;
        self
    }

    /// Keeps the first failure of a conjunction.
    pub(crate) fn and(self, other: Outcome) -> Self {
        let bound = if other.bound > self.bound { other.bound } else { self.bound };
        Outcome { failure: self.failure.or(other.failure), bound }
    }
}

/// Evaluates `f` on every sample in parallel and folds the verdicts in
/// sample order; an error counts as a failure of that sample.
pub(crate) fn run_samples<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Outcome> + Sync) -> CheckReport {
    let verdicts: Vec<Result<Outcome>> = items.par_iter().map(&f).collect();
    let mut r = CheckReport::new();
    for (i, v) in verdicts.into_iter().enumerate() {
        match v {
            Ok(o) => {
                r.bound(&o.bound);
                match o.failure {
                    None => r.record(i, true, String::new),
                    Some(d) => r.fail(i, d),
                }
            }
            Err(e) => r.fail(i, format!("error: {e}")),
        }
    }
    r
}

pub(crate) fn fq(x: &Q) -> String {
    fmt_q(x)
}

/// One registered identity.
pub struct Check {
    pub identity: &'static str,
    pub equation: &'static str,
    pub run: Box<dyn Fn(&RunConfig) -> Result<CheckReport> + Send + Sync>,
}

impl Check {
    pub fn new(
        identity: &'static str,
        equation: &'static str,
        run: impl Fn(&RunConfig) -> Result<CheckReport> + Send + Sync + 'static,
    ) -> Self {
        Check { identity, equation, run: Box::new(run) }
    }

    pub fn execute(&self, cfg: &RunConfig) -> IdentityResult {
        let start = Instant::now();
        let report = (self.run)(cfg).unwrap_or_else(|e| {
            let mut r = CheckReport::new();
            r.fail(0, format!("setup error: {e}"));
            r
        });
        let mut out = IdentityResult::from_report(self.identity, self.equation, report);
        if cfg.timing {
            out.wall_ms = Some(start.elapsed().as_millis() as u64);
        }
        out
    }
}

pub const SUITES: [&str; 10] =
    ["qm", "cochains", "chains", "kernel", "central", "theta", "lambda", "transgression", "spectral", "all"];

/// Same identities, each reporting `note` instead of running.
fn skipped(checks: Vec<Check>, note: &'static str) -> Vec<Check> {
    checks
        .into_iter()
        .map(|c| {
            Check::new(c.identity, c.equation, move |_| {
                Ok(CheckReport { skipped: Some(note.to_string()), ..CheckReport::new() })
            })
        })
        .collect()
}

const FINITE_FIBER: &str = "normal subgroup is finite, so every homogeneous cocycle on it is zero";

/// Checks that need a free normal subgroup run on the chosen fixture; the
/// finite fixture reports them as skipped.
fn fiber_checks(
    fixture: &str,
    semidirect: fn(context::Builder<fixtures::SemidirectZ, FreeGroup>) -> Vec<Check>,
    swap: fn(context::Builder<fixtures::SwapProduct, FiniteGroup>) -> Vec<Check>,
) -> Vec<Check> {
    match fixture {
        "split-swap" => swap(swap_ctx),
        "z4-hs" => skipped(semidirect(semidirect_ctx), FINITE_FIBER),
        _ => semidirect(semidirect_ctx),
    }
}

pub fn suite_checks(suite: &str, fixture: &str) -> Result<Vec<Check>> {
    check_fixture_name(fixture)?;
    Ok(match suite {
        "qm" => qm_checks(),
        "cochains" => cochain_checks(),
        "chains" => chain_checks(),
        "kernel" => kernel_checks(),
        "central" => fiber_checks(fixture, central::central_checks_for, central::central_checks_for),
        "theta" => fiber_checks(fixture, theta::theta_checks_for, theta::theta_checks_for),
        "lambda" => fiber_checks(fixture, theta::lambda_checks_for, theta::lambda_checks_for),
        "transgression" | "T" => {
            fiber_checks(fixture, theta::transgression_checks_for, theta::transgression_checks_for)
        }
        "spectral" => spectral_checks(),
        "all" => {
            let mut all = Vec::new();
            for s in &SUITES[..SUITES.len() - 1] {
                all.extend(suite_checks(s, fixture)?);
            }
            all
        }
        other => return Err(Error::Invalid(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    })
}

/// Runs a suite, or the single identity `only` within it.
pub fn run_suite(suite: &str, cfg: &RunConfig, only: Option<&str>) -> Result<Report> {
    run_checks(suite, suite_checks(suite, &cfg.fixture)?, cfg, only)
}

pub fn run_checks(suite: &str, checks: Vec<Check>, cfg: &RunConfig, only: Option<&str>) -> Result<Report> {
    let selected: Vec<&Check> = checks.iter().filter(|c| only.is_none_or(|o| c.identity == o)).collect();
    if selected.is_empty() {
        return Err(Error::Invalid(format!("no identity {:?} in suite {suite}", only.unwrap_or(""))));
    }
    let mut results: Vec<IdentityResult> = selected.par_iter().map(|c| c.execute(cfg)).collect();
    results.sort_by(|a, b| a.identity.cmp(&b.identity));
    Ok(Report {
        suite: suite.to_string(),
        fixture: cfg.fixture.clone(),
        seed: cfg.seed,
        cutoff: cfg.cutoff,
        passed: results.iter().all(|r| r.passed()),
        results,
    })
}
