//! `posext`: positive selfadjoint extensions from the command line.
//!
//! Reports are written to standard output as JSON and diagnostics to
//! standard error. Exit status 1 means a malformed input file or usage error,
//! 2 an invariant violation, 3 a failed internal verification.

mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use posext::discretization::{demo_report, minimal_laplacian};
use posext::extensions::MembershipRoute;
use posext::linalg::Tolerance;
use posext::oracle::run_all;
use serde::Serialize;
use serde_json::{json, Value};

use crate::io::{base_tolerance, read_gamma, read_matrix, read_problem, Malformed};

#[derive(Parser)]
#[command(
    name = "posext",
    version,
    about = "Positive selfadjoint extensions of symmetric operators on ℂⁿ"
)]
struct Cli {
    /// Print compact instead of indented JSON.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parametrization data of the Cayley transform, including the basis
    /// in which Γ files are read.
    Parametrize { problem: PathBuf },
    /// The extension T̃(Γ), its inverse Cayley transform S̃(Γ) and the
    /// domain decomposition.
    Extend {
        problem: PathBuf,
        /// `krein`, `friedrichs`, `neutral`, or a Γ file.
        #[arg(long)]
        gamma: String,
    },
    /// Whether a Hermitian matrix is a selfadjoint contraction extending T.
    Membership {
        problem: PathBuf,
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long, value_enum, default_value_t = RouteArg::Both)]
        route: RouteArg,
    },
    /// Form order between S̃(Γ_a) and S̃(Γ_b).
    Compare {
        problem: PathBuf,
        #[arg(long)]
        gamma_a: String,
        #[arg(long)]
        gamma_b: String,
    },
    /// Runs every randomized verification suite.
    Verify(VerifyArgs),
    /// Worked examples.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Ambient dimensions as `lo..hi` (inclusive) or a single number.
    #[arg(long, default_value = "2..5", value_parser = parse_dims)]
    dims: (usize, usize),
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Leave out elapsed times so repeated runs are byte-identical.
    #[arg(long)]
    omit_timing: bool,
}

#[derive(Subcommand)]
enum Demo {
    /// Friedrichs and Kreĭn extensions of the minimal second-difference operator.
    Laplacian {
        #[arg(long, default_value_t = 6)]
        size: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Direct,
    Interval,
    Both,
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!("invalid dimension range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

enum Failure {
    Malformed(String),
    Library(posext::Error),
    Verification(String, Value),
}

impl From<Malformed> for Failure {
    fn from(m: Malformed) -> Self {
        Failure::Malformed(m.0)
    }
}

impl From<posext::Error> for Failure {
    fn from(e: posext::Error) -> Self {
        Failure::Library(e)
    }
}

/// Input errors map to status 1, invariant violations to 2, internal
/// self-check failures to 3.
fn classify(e: &posext::Error) -> (&'static str, u8) {
    use posext::Error::*;
    match e {
        NonFinite | NotSquare { .. } | DimensionMismatch { .. } | Precondition(_) => ("malformed_input", 1),
        CrossCheck(_) => ("internal_verification", 3),
        _ => ("invariant_violation", 2),
    }
}

fn tolerance_for(overrides: &io::ToleranceOverrides) -> Result<Tolerance, Failure> {
    let tol = overrides.apply(base_tolerance()?);
    tol.validate()?;
    Ok(tol)
}

fn routes(arg: RouteArg) -> Vec<MembershipRoute> {
    match arg {
        RouteArg::Direct => vec![MembershipRoute::Direct],
        RouteArg::Interval => vec![MembershipRoute::Interval],
        RouteArg::Both => vec![MembershipRoute::Direct, MembershipRoute::Interval],
    }
}

fn to_value<T: Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("reports serialize")
}

fn run(command: Command) -> Result<Value, Failure> {
    match command {
        Command::Parametrize { problem } => {
            let file = read_problem(&problem)?;
            let tol = tolerance_for(&file.overrides)?;
            let problem = report::load_problem(&file, &tol)?;
            Ok(to_value(&report::parametrize_doc(&problem)))
        }
        Command::Extend { problem, gamma } => {
            let file = read_problem(&problem)?;
            let spec = read_gamma(&gamma)?;
            let tol = tolerance_for(&file.overrides)?;
            let problem = report::load_problem(&file, &tol)?;
            let gamma = report::resolve_gamma(&problem, &spec, &tol)?;
            Ok(to_value(&report::extend_doc(&problem, &gamma, &tol)?))
        }
        Command::Membership {
            problem,
            candidate,
            route,
        } => {
            let file = read_problem(&problem)?;
            let candidate = read_matrix(&candidate, "candidate")?;
            let tol = tolerance_for(&file.overrides)?;
            let problem = report::load_problem(&file, &tol)?;
            let n = problem.params().ambient_dim();
            if candidate.shape() != (n, n) {
                return Err(Failure::Malformed(format!(
                    "candidate is {}x{}, expected {n}x{n}",
                    candidate.nrows(),
                    candidate.ncols()
                )));
            }
            let doc = report::membership_doc(&problem, &candidate, &routes(route), &tol);
            if doc.routes_disagree() {
                return Err(Failure::Verification(
                    "membership routes disagree".into(),
                    to_value(&doc),
                ));
            }
            Ok(to_value(&doc))
        }
        Command::Compare {
            problem,
            gamma_a,
            gamma_b,
        } => {
            let file = read_problem(&problem)?;
            let (spec_a, spec_b) = (read_gamma(&gamma_a)?, read_gamma(&gamma_b)?);
            let tol = tolerance_for(&file.overrides)?;
            let problem = report::load_problem(&file, &tol)?;
            let a = report::resolve_gamma(&problem, &spec_a, &tol)?;
            let b = report::resolve_gamma(&problem, &spec_b, &tol)?;
            Ok(to_value(&report::compare_doc(&problem, &a, &b, &tol)?))
        }
        Command::Verify(args) => {
            let tol = tolerance_for(&Default::default())?;
            let reports = run_all(args.dims.0..=args.dims.1, args.trials, args.seed, &tol)?;
            let failures: usize = reports.iter().map(|r| r.failures).sum();
            let mut reports = to_value(&reports);
            if args.omit_timing {
                for r in reports.as_array_mut().into_iter().flatten() {
                    r.as_object_mut().map(|o| o.remove("elapsed_seconds"));
                }
            }
            let doc = json!({
                "dims": [args.dims.0, args.dims.1],
                "trials": args.trials,
                "seed": args.seed,
                "total_failures": failures,
                "passed": failures == 0,
                "reports": reports,
            });
            if failures > 0 {
                return Err(Failure::Verification(format!("{failures} verification failures"), doc));
            }
            Ok(doc)
        }
        Command::Demo {
            demo: Demo::Laplacian { size, samples, seed },
        } => {
            let tol = tolerance_for(&Default::default())?;
            let problem = minimal_laplacian(size, &tol)?;
            let report = demo_report(&problem, samples, seed, &tol)?;
            let doc = to_value(&report);
            if !report.passed() {
                return Err(Failure::Verification("demo order checks failed".into(), doc));
            }
            Ok(doc)
        }
    }
}

fn emit(value: &Value, compact: bool) {
    let text = if compact {
        serde_json::to_string(value)
    } else {
        serde_json::to_string_pretty(value)
    };
    println!("{}", text.expect("JSON values serialize"));
}

fn error_doc(kind: &str, invariant: Option<&str>, residual: Option<f64>, message: &str) -> Value {
    json!({ "error": { "kind": kind, "invariant": invariant, "residual": residual, "message": message } })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let compact = cli.compact;
    match run(cli.command) {
        Ok(value) => {
            emit(&value, compact);
            ExitCode::SUCCESS
        }
        Err(Failure::Malformed(message)) => {
            eprintln!("error: {message}");
            emit(&error_doc("malformed_input", None, None, &message), compact);
            ExitCode::from(1)
        }
        Err(Failure::Library(e)) => {
            let (kind, code) = classify(&e);
            let message = e.to_string();
            eprintln!("error: {message}");
            emit(&error_doc(kind, Some(e.invariant()), e.residual(), &message), compact);
            ExitCode::from(code)
        }
        Err(Failure::Verification(message, doc)) => {
            eprintln!("verification failed: {message}");
            emit(&doc, compact);
            ExitCode::from(3)
        }
    }
}
