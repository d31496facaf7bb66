//! The `majorant` command-line front end.
//!
//! Every subcommand writes one JSON document (17 significant digits per
//! float) to standard output or to `--output`. Exit status is 0 on success
//! or a true verdict, 1 on a false verdict or an unsatisfiable request, and
//! 2 on malformed input.
//!
//! Lists (`--p`, `--lambda`) are given inline as a JSON array or
//! `{"values": [...]}` object, or as a path to a file holding either JSON
//! form or CSV with one value per line. Lists are sorted into decreasing
//! order on input, except the diagonal of `projection`, which keeps its
//! order. Matrices, measures and step functions are JSON files (inline JSON
//! is accepted as well).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::eigenlist::{
    check_majorization, normalize_list, reduce_to_equality, EigenList, MajorizationMode,
};
use crate::horn::horn_construct;
use crate::json::to_string_pretty;
use crate::matrix::{HermitianMatrix, MatrixJson};
use crate::measure::{
    majorize_measure, moment, quantile_transport, tail_integral, CompactMeasure, MeasureMethod,
    StepFunction, TailMode,
};
use crate::pinching::{align_step_functions, pinch_experiment};
use crate::trace_class::{contraction_diagonal, projection_with_diagonal, realize_finite_rank};
use crate::Error;

/// Environment variable that takes precedence over `--seed`.
pub const SEED_ENV: &str = "MAJORANT_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "majorant",
    version,
    about = "Schur-Horn constructions and majorization checks"
)]
pub struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prefix-sum majorization report for p against lambda.
    Majorize {
        #[arg(long)]
        p: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value = "equality")]
        mode: MajorizationMode,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Replace lambda by a list mu with p majorized by mu and equal totals.
    Reduce {
        #[arg(long)]
        p: String,
        #[arg(long)]
        lambda: String,
    },
    /// Hermitian matrix with spectrum lambda and diagonal p.
    Construct {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        p: String,
        /// Build an N x N matrix from a finite-rank spectrum, padding both
        /// lists with zeros.
        #[arg(long, value_name = "N")]
        truncate: Option<usize>,
    },
    /// Contraction L with diag(L* A L) = p.
    Contraction {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        p: String,
    },
    /// Rank-m projection on C^N with diagonal p.
    Projection {
        #[arg(long)]
        p: String,
        #[arg(long)]
        m: usize,
        #[arg(long, visible_alias = "truncate", value_name = "N")]
        n: usize,
    },
    /// Spectral distribution of a matrix, or a measure given directly.
    Measure {
        /// Matrix JSON or measure JSON.
        input: String,
        /// Extra tail-integral thresholds beyond the breakpoints.
        #[arg(long = "tail", value_name = "T")]
        tails: Vec<f64>,
    },
    /// Decide m ⪯ n by each method.
    MajorizeMeasure {
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
    },
    /// Quantile transport of a measure onto N equal cells of [0, 1).
    Transport {
        #[arg(long)]
        measure: String,
        #[arg(long, value_name = "N")]
        n: usize,
    },
    /// Randomized check of the pinching inequalities and the Schur theorem.
    PinchExperiment {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Overridden by MAJORANT_SEED when set.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cell permutation carrying step function f close to g.
    Align {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Debug)]
enum Failure {
    /// Malformed input: exit 2.
    Input(String),
    /// Well-formed input with no solution: exit 1.
    Unsatisfiable(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) => Failure::Input(e.to_string()),
            _ => Failure::Unsatisfiable(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(String, bool), Failure>;

fn read_source(arg: &str) -> std::result::Result<String, Failure> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        return Ok(arg.to_owned());
    }
    fs::read_to_string(Path::new(arg)).map_err(|e| Failure::Input(format!("{arg}: {e}")))
}

fn parse_json<T: DeserializeOwned>(arg: &str, text: &str) -> std::result::Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Input(format!("{arg}: {e}")))
}

fn load_values(arg: &str) -> std::result::Result<Vec<f64>, Failure> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum ListForm {
        Bare(Vec<f64>),
        Wrapped { values: Vec<f64> },
    }
    let text = read_source(arg)?;
    let t = text.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        return Ok(match parse_json::<ListForm>(arg, &text)? {
            ListForm::Bare(v) | ListForm::Wrapped { values: v } => v,
        });
    }
    Ok(EigenList::from_csv(&text)
        .map_err(|e| Failure::Input(format!("{arg}: {e}")))?
        .into_values())
}

fn load_list(arg: &str) -> std::result::Result<EigenList, Failure> {
    normalize_list(&load_values(arg)?).map_err(|e| Failure::Input(format!("{arg}: {e}")))
}

fn load_matrix(arg: &str) -> std::result::Result<HermitianMatrix, Failure> {
    let text = read_source(arg)?;
    parse_json(arg, &text)
}

/// A measure, or a matrix whose spectral distribution is wanted.
fn load_measure(arg: &str) -> std::result::Result<CompactMeasure, Failure> {
    let text = read_source(arg)?;
    let value: Value = parse_json(arg, &text)?;
    if value.get("entries").is_some() {
        let a: HermitianMatrix = parse_json(arg, &text)?;
        return Ok(CompactMeasure::from_matrix(&a)?);
    }
    parse_json(arg, &text)
}

fn load_step(arg: &str) -> std::result::Result<StepFunction, Failure> {
    let text = read_source(arg)?;
    parse_json(arg, &text)
}

fn emit<T: Serialize>(value: &T, verdict: bool) -> Outcome {
    let text = to_string_pretty(value).map_err(|e| Failure::Input(e.to_string()))?;
    Ok((text, verdict))
}

fn matrix_json(m: &nalgebra::DMatrix<crate::matrix::C64>) -> MatrixJson {
    MatrixJson::from_matrix(m)
}

#[derive(Serialize)]
struct Tail {
    t: f64,
    hinge: f64,
    survivor: f64,
}

#[derive(Serialize)]
struct MeasureReport {
    measure: CompactMeasure,
    total_mass: f64,
    mean: f64,
    moments: Vec<f64>,
    tails: Vec<Tail>,
}

#[derive(Serialize)]
struct OrderReport {
    holds: bool,
    methods: serde_json::Map<String, Value>,
}

/// Effective seed: `MAJORANT_SEED` if set, else the flag.
pub fn resolve_seed(flag: u64, env: Option<&str>) -> std::result::Result<u64, String> {
    match env {
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_ENV}={s:?} is not an unsigned 64-bit integer")),
        None => Ok(flag),
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Majorize {
            p,
            lambda,
            mode,
            tol,
        } => {
            let report = check_majorization(&load_list(&p)?, &load_list(&lambda)?, mode, tol);
            let holds = report.holds;
            emit(&report, holds)
        }
        Command::Reduce { p, lambda } => {
            let mu = reduce_to_equality(&load_list(&p)?, &load_list(&lambda)?)?;
            emit(&mu, true)
        }
        Command::Construct {
            lambda,
            p,
            truncate,
        } => {
            let (lambda, p) = (load_list(&lambda)?, load_list(&p)?);
            let a = match truncate {
                Some(n) => realize_finite_rank(&lambda, &p, n)?,
                None => horn_construct(&lambda, &p)?,
            };
            emit(&a, true)
        }
        Command::Contraction { matrix, p } => {
            let l = contraction_diagonal(&load_matrix(&matrix)?, &load_list(&p)?)?;
            emit(&matrix_json(&l), true)
        }
        Command::Projection { p, m, n } => {
            let proj = projection_with_diagonal(&load_values(&p)?, m, n)?;
            emit(&proj, true)
        }
        Command::Measure { input, tails } => {
            let m = load_measure(&input)?;
            let mut ts = m.breakpoints();
            ts.extend(tails);
            ts.sort_by(f64::total_cmp);
            ts.dedup();
            let report = MeasureReport {
                total_mass: m.total_mass(),
                mean: m.mean(),
                moments: (0..=6).map(|k| moment(&m, k)).collect(),
                tails: ts
                    .into_iter()
                    .map(|t| Tail {
                        t,
                        hinge: tail_integral(&m, t, TailMode::Hinge),
                        survivor: tail_integral(&m, t, TailMode::Survivor),
                    })
                    .collect(),
                measure: m,
            };
            emit(&report, true)
        }
        Command::MajorizeMeasure { m, n } => {
            let (m, n) = (load_measure(&m)?, load_measure(&n)?);
            let mut methods = serde_json::Map::new();
            let mut holds = true;
            for method in MeasureMethod::ALL {
                let v = majorize_measure(&m, &n, method)?;
                holds &= v;
                methods.insert(method.name().to_owned(), Value::Bool(v));
            }
            emit(&OrderReport { holds, methods }, holds)
        }
        Command::Transport { measure, n } => {
            let f = quantile_transport(&load_measure(&measure)?, n)?;
            emit(&f, true)
        }
        Command::PinchExperiment { n, trials, seed } => {
            let env = std::env::var(SEED_ENV).ok();
            let seed = resolve_seed(seed, env.as_deref()).map_err(Failure::Input)?;
            let report = pinch_experiment(n, trials, seed)?;
            let ok = report.passed();
            emit(&report, ok)
        }
        Command::Align { f, g, eps } => {
            let al = align_step_functions(&load_step(&f)?, &load_step(&g)?, eps)?;
            emit(&al, true)
        }
    }
}

/// Run a parsed invocation, writing the result to `out` (or the `--output`
/// file) and diagnostics to `err`. Returns the process exit code.
pub fn run(cli: Cli, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let result = dispatch(cli.command).and_then(|(text, verdict)| {
        match &cli.output {
            Some(path) => fs::write(path, &text)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
            None => out
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Input(e.to_string()))?,
        }
        Ok(verdict)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Unsatisfiable(msg)) => {
            let _ = writeln!(err, "majorant: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "majorant: {msg}");
            2
        }
    }
}
