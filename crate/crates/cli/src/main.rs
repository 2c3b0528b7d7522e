use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qmcoh::group::{AutGroup, FreeAutomorphism, FreeGroup, ReducedWord};
use qmcoh::harness::{self, RunConfig};
use qmcoh::quasimorphism::{defect_estimate, homogeneous_cocycle, homogenize, parse_qm_spec, Quasimorphism};
use qmcoh::rational::fmt_q;
use qmcoh::spectral::{self, Field, PageReport, RandomComplexOptions, SpectralSequence, F2, F3, F5, F7};
use serde_json::json;

/// Exact computations with quasimorphisms, bounded cocycles and extension kernels.
///
/// Words use lowercase generators with an apostrophe for the inverse
/// (`a'b` is a^-1 b); an uppercase letter is accepted as the inverse too.
#[derive(Parser)]
#[command(name = "qmcoh", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate quasimorphisms and their homogeneous cocycles.
    Qm {
        #[command(subcommand)]
        op: QmOp,
    },
    /// Run an identity suite and write a JSON report. Exit code 0 iff no failures.
    Verify(VerifyArgs),
    /// Spectral sequence page tables.
    Ss(SsArgs),
}

#[derive(Args)]
struct QmSource {
    /// Brooks counting word.
    #[arg(long, conflicts_with = "spec")]
    word: Option<String>,
    /// JSON quasimorphism spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Precompose with the automorphism in this JSON file.
    #[arg(long)]
    aut: Option<PathBuf>,
    #[arg(long, default_value_t = qmcoh::quasimorphism::DEFAULT_WINDOW)]
    window: usize,
    #[arg(long, default_value_t = qmcoh::quasimorphism::DEFAULT_NMAX)]
    nmax: usize,
    /// Print a JSON row instead of the bare value.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum QmOp {
    /// Phi(g)
    Eval {
        #[command(flatten)]
        src: QmSource,
        #[arg(long, allow_hyphen_values = true)]
        on: String,
    },
    /// phi(g) = lim Phi(g^n)/n
    Homogenize {
        #[command(flatten)]
        src: QmSource,
        #[arg(long, allow_hyphen_values = true)]
        on: String,
    },
    /// c_x(g,h) = phi(gh) - phi(g) - phi(h)
    Cocycle {
        #[command(flatten)]
        src: QmSource,
        #[arg(long, num_args = 2, value_names = ["G", "H"], allow_hyphen_values = true)]
        pair: Vec<String>,
    },
    /// Largest |Phi(gh) - Phi(g) - Phi(h)| over seeded random pairs (a lower bound).
    DefectEstimate {
        #[command(flatten)]
        src: QmSource,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value = "f2-semidirect-z")]
    fixture: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Override every per-identity sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// m-series cutoff N.
    #[arg(long, default_value_t = 12)]
    cutoff_n: u32,
    #[arg(long, default_value_t = qmcoh::quasimorphism::DEFAULT_WINDOW)]
    window: usize,
    #[arg(long, default_value_t = qmcoh::quasimorphism::DEFAULT_NMAX)]
    nmax: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the identity to equation map and exit.
    #[arg(long)]
    list: bool,
    /// Run only this identity of the suite.
    #[arg(long)]
    identity: Option<String>,
    /// Include wall time per identity (breaks byte-identical reports).
    #[arg(long)]
    timing: bool,
    /// Check a kernel read from a JSON spec file instead of a suite.
    #[arg(long)]
    kernel: Option<PathBuf>,
}

#[derive(Args)]
struct SsArgs {
    /// Named finite fixture.
    #[arg(long, conflicts_with_all = ["complex", "random"])]
    fixture: Option<String>,
    /// JSON filtered complex file.
    #[arg(long)]
    complex: Option<PathBuf>,
    /// Seeded random filtered complex.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Highest reported total degree for the fixture or random complex.
    #[arg(long, default_value_t = 3)]
    max_degree: usize,
    /// Also write the random complex in the complex file format.
    #[arg(long, requires = "random")]
    dump: Option<PathBuf>,
    /// Plain-text grids instead of JSON.
    #[arg(long)]
    table: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Command::Qm { op } => qm(op).map(|()| ExitCode::SUCCESS),
        Command::Verify(args) => verify(args),
        Command::Ss(args) => ss(args),
    }
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_qm(src: &QmSource, f2: &FreeGroup) -> Result<Quasimorphism> {
    let qm = match (&src.word, &src.spec) {
        (Some(w), None) => Quasimorphism::brooks(&f2.parse(w)?)?,
        (None, Some(p)) => parse_qm_spec(&read(p)?).with_context(|| format!("in {}", p.display()))?,
        _ => bail!("give exactly one of --word or --spec"),
    };
    match &src.aut {
        None => Ok(qm),
        Some(p) => {
            let alpha: FreeAutomorphism =
                f2.automorphism_from_json(&read(p)?).with_context(|| format!("in {}", p.display()))?;
            Ok(precompose(qm, alpha))
        }
    }
}

/// `g -> Phi(alpha(g))`
fn precompose(qm: Quasimorphism, alpha: FreeAutomorphism) -> Quasimorphism {
    let name = format!("{}∘α", qm.name());
    let (bound, homogeneous) = (qm.defect_bound().cloned(), qm.is_homogeneous());
    let (qm, f2) = (Arc::new(qm), FreeGroup::new(2));
    Quasimorphism::custom(name, Arc::new(move |g: &ReducedWord| qm.eval(&f2.apply(&alpha, g))), bound, homogeneous)
}

fn emit(src: &QmSource, op: &str, inputs: serde_json::Value, value: &qmcoh::Q) {
    if src.json {
        println!("{}", json!({ "op": op, "inputs": inputs, "value": fmt_q(value), "error_bound": "0" }));
    } else {
        println!("{}", fmt_q(value));
    }
}

fn qm(op: QmOp) -> Result<()> {
    let f2 = FreeGroup::new(2);
    match op {
        QmOp::Eval { src, on } => {
            let v = load_qm(&src, &f2)?.eval(&f2.parse(&on)?);
            emit(&src, "eval", json!({ "on": on }), &v);
        }
        QmOp::Homogenize { src, on } => {
            let v = homogenize(&load_qm(&src, &f2)?, &f2.parse(&on)?, src.window, src.nmax)?;
            emit(&src, "homogenize", json!({ "on": on }), &v);
        }
        QmOp::Cocycle { src, pair } => {
            let c = homogeneous_cocycle(&load_qm(&src, &f2)?, src.window, src.nmax)?;
            let v = c.eval(&f2.parse(&pair[0])?, &f2.parse(&pair[1])?)?;
            emit(&src, "cocycle", json!({ "pair": pair }), &v);
        }
        QmOp::DefectEstimate { src, samples, seed } => {
            let v = defect_estimate(&load_qm(&src, &f2)?, &f2, samples, seed);
            emit(&src, "defect-estimate", json!({ "samples": samples, "seed": seed }), &v);
        }
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let cfg = RunConfig {
        fixture: a.fixture.clone(),
        seed: a.seed,
        cutoff: a.cutoff_n,
        window: a.window,
        n_max: a.nmax,
        samples: a.samples,
        timing: a.timing,
        ..RunConfig::default()
    };
    if a.list {
        let checks = harness::suite_checks(&a.suite, &a.fixture)?;
        let map: serde_json::Map<String, serde_json::Value> =
            checks.iter().map(|c| (c.identity.to_string(), json!(c.equation))).collect();
        println!("{}", serde_json::to_string_pretty(&map)?);
        return Ok(ExitCode::SUCCESS);
    }
    let report = match &a.kernel {
        Some(p) => {
            let k = qmcoh::extension::parse_kernel_spec(&read(p)?).with_context(|| format!("in {}", p.display()))?;
            harness::run_checks("kernel-spec", harness::kernel_spec_checks(Arc::new(k)), &cfg, a.identity.as_deref())?
        }
        None => harness::run_suite(&a.suite, &cfg, a.identity.as_deref())?,
    };
    let text = report.to_json();
    match &a.out {
        Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    let code = match report.failed().next() {
        None => ExitCode::SUCCESS,
        Some(r) => {
            let w = &r.failures[0];
            eprintln!("{} failed at sample {}: {}", r.identity, w.sample_index, w.detail);
            ExitCode::from(1)
        }
    };
    Ok(code)
}

fn ss(a: SsArgs) -> Result<ExitCode> {
    let budget = spectral::budget_mb();
    let report = match (&a.fixture, &a.complex, a.random) {
        (Some(name), None, false) => {
            if name != "z4-hs" {
                bail!("no spectral fixture {name:?}; available: z4-hs");
            }
            let ext = qmcoh::extension::fixtures::z4_extension()?.ext;
            let hs = spectral::hs_double_complex::<F2>(&ext, a.max_degree, budget)?;
            SpectralSequence::new(Arc::new(hs.vertical), budget)?.report()?
        }
        (None, Some(path), false) => {
            let text = read(path)?;
            let field = spectral::complex_file_field(&text)?;
            match field.as_str() {
                "F2" => file_report::<F2>(&text, budget)?,
                "F3" => file_report::<F3>(&text, budget)?,
                "F5" => file_report::<F5>(&text, budget)?,
                "F7" => file_report::<F7>(&text, budget)?,
                "Q" => file_report::<qmcoh::Q>(&text, budget)?,
                other => bail!("unsupported field {other:?}; expected F2, F3, F5, F7 or Q"),
            }
        }
        (None, None, true) => {
            let opts = RandomComplexOptions { top: a.max_degree + 2, ..RandomComplexOptions::default() };
            let fc = spectral::random_filtered_complex::<F2>(a.seed, &opts)?;
            if let Some(p) = &a.dump {
                fs::write(p, spectral::dump_complex(&fc)).with_context(|| format!("writing {}", p.display()))?;
            }
            SpectralSequence::new(Arc::new(fc), budget)?.report()?
        }
        _ => bail!("choose exactly one of --fixture, --complex, --random"),
    };
    let text = if a.table { report.to_table() } else { format!("{}\n", report.to_json()) };
    match &a.out {
        Some(p) => fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(if report.converged { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn file_report<F: Field>(text: &str, budget: usize) -> Result<PageReport> {
    let fc = spectral::parse_complex::<F>(text)?;
    Ok(SpectralSequence::new(Arc::new(fc), budget)?.report()?)
}
