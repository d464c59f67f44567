mod io;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use steinitz_ip::dispatch::{solve_with, Algorithm};
use steinitz_ip::dp::{feasible_report, node_count_bound};
use steinitz_ip::generate::{generate, GenConfig};
use steinitz_ip::oracle::{brute_force_solve, lp_ray_exists, EnumerationBox};
use steinitz_ip::proximity::{cook_l1_bound, gap_bound, l1_bound, solve_bounded};
use steinitz_ip::steinitz::{max_prefix_norm, steinitz_reorder, RearrangementInput};
use steinitz_ip::{linf_norm, IPInstance, SolveError, SolveOutcome, SolveReport};

use crate::io::{instance_json, parse_instance, parse_vectors, read_source, ResultFile};

/// Exact solvers for integer programs `max c^T x, A x = b, x >= 0 (x <= u)`.
///
/// Exit status: 0 optimal (or success), 1 infeasible, 2 unbounded,
/// 3 unreadable input, 4 algorithm precondition violated, 5 other failure.
#[derive(Parser)]
#[command(name = "stip", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file (`-` reads standard input).
    Solve {
        path: String,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Auto)]
        algorithm: AlgorithmArg,
    },
    /// Find any feasible point.
    Feasible { path: String },
    /// Print the distance, gap and node-count bounds for an instance.
    Bounds { path: String },
    /// Reorder a zero-sum vector family so its prefix sums stay small.
    Steinitz { path: String },
    /// Print a random feasible instance.
    Gen {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        bounded: bool,
    },
    /// Brute-force an instance over a box (its own bounds, or `--limit`).
    Oracle {
        path: String,
        #[arg(long)]
        limit: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    Auto,
    Dp,
    Proximity,
    Knapsack,
    Acyclic,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Auto => Algorithm::Auto,
            AlgorithmArg::Dp => Algorithm::Dp,
            AlgorithmArg::Proximity => Algorithm::Proximity,
            AlgorithmArg::Knapsack => Algorithm::Knapsack,
            AlgorithmArg::Acyclic => Algorithm::Acyclic,
        }
    }
}

enum Failure {
    Parse(String),
    Precondition(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 3,
            Failure::Precondition(_) => 4,
            Failure::Other(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Precondition(m) | Failure::Other(m) => m,
        }
    }
}

impl From<io::ParseError> for Failure {
    fn from(e: io::ParseError) -> Self {
        Failure::Parse(e.0)
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::UpperBoundsPresent
            | SolveError::MissingUpperBounds
            | SolveError::PreconditionViolated(_) => Failure::Precondition(e.to_string()),
            SolveError::TooLarge(_) | SolveError::Internal(_) => Failure::Other(e.to_string()),
        }
    }
}

fn load(path: &str) -> Result<IPInstance, Failure> {
    Ok(parse_instance(&read_source(path)?)?)
}

fn status_code(outcome: &SolveOutcome) -> u8 {
    match outcome {
        SolveOutcome::Optimal { .. } => 0,
        SolveOutcome::Infeasible => 1,
        SolveOutcome::Unbounded => 2,
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn emit(report: &SolveReport, start: Instant, algorithm: &str) -> u8 {
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    print_json(&ResultFile::new(&report.outcome, &report.stats, wall_ms, algorithm));
    status_code(&report.outcome)
}

fn cmd_solve(path: &str, algorithm: Algorithm) -> Result<u8, Failure> {
    let inst = load(path)?;
    let start = Instant::now();
    let (report, ran) = solve_with(&inst, algorithm)?;
    Ok(emit(&report, start, ran.name()))
}

/// Without bounds this is the tube search; with bounds, the bounded solver on
/// a zero objective. A found point is reported as `optimal` with its value.
fn cmd_feasible(path: &str) -> Result<u8, Failure> {
    let inst = load(path)?;
    let start = Instant::now();
    let (solution, stats) = if inst.upper().is_some() {
        let zero = IPInstance::new(
            inst.a().clone(),
            inst.b().to_vec(),
            vec![BigInt::from(0); inst.n()],
            inst.upper().map(<[_]>::to_vec),
        )
        .map_err(|e| Failure::Other(e.to_string()))?;
        let report = solve_bounded(&zero)?;
        (report.outcome.solution().map(<[_]>::to_vec), report.stats)
    } else {
        let report = feasible_report(&inst)?;
        (report.solution, report.stats)
    };
    let outcome = match solution {
        Some(x) => SolveOutcome::Optimal {
            value: inst.objective(&x),
            solution: x,
        },
        None => SolveOutcome::Infeasible,
    };
    Ok(emit(&SolveReport { outcome, stats }, start, "feasibility"))
}

fn cmd_bounds(path: &str) -> Result<u8, Failure> {
    let inst = load(path)?;
    let (m, n, delta) = (inst.m(), inst.n(), inst.delta());
    print_json(&json!({
        "l1_bound": l1_bound(m, delta).to_string(),
        "cook_l1_bound": cook_l1_bound(n, m, delta).to_string(),
        "gap_bound": gap_bound(&linf_norm(inst.c()), m, delta).to_string(),
        "node_count_bound": node_count_bound(m, delta, inst.b()).to_string(),
    }));
    Ok(0)
}

fn cmd_steinitz(path: &str) -> Result<u8, Failure> {
    let (vectors, bound) = parse_vectors(&read_source(path)?)?;
    let input = match bound {
        Some(b) => RearrangementInput::with_norm_bound(vectors, b),
        None => RearrangementInput::new(vectors),
    }
    .map_err(|e| Failure::Parse(e.to_string()))?;
    let perm = steinitz_reorder(&input).map_err(|e| Failure::Other(e.to_string()))?;
    print_json(&json!({
        "permutation": perm.order().iter().map(|i| i + 1).collect::<Vec<_>>(),
        "max_prefix_norm": max_prefix_norm(input.vectors(), &perm).to_string(),
        "bound": input.guarantee().to_string(),
    }));
    Ok(0)
}

fn cmd_gen(m: usize, n: usize, delta: i64, seed: u64, bounded: bool) -> Result<u8, Failure> {
    if m == 0 || n == 0 || delta < 0 {
        return Err(Failure::Parse("need m >= 1, n >= 1 and delta >= 0".into()));
    }
    let inst = generate(&GenConfig { m, n, delta, seed, bounded });
    print_json(&instance_json(&inst));
    Ok(0)
}

fn cmd_oracle(path: &str, limit: Option<u64>) -> Result<u8, Failure> {
    let inst = load(path)?;
    let bx = match (limit, EnumerationBox::from_upper(&inst), EnumerationBox::for_nonnegative(&inst)) {
        (Some(l), _, _) => EnumerationBox::uniform(inst.n(), l),
        (None, Some(b), _) | (None, None, Some(b)) => b,
        (None, None, None) => {
            return Err(Failure::Precondition(
                "instance has no bounds and a signed matrix; pass --limit".into(),
            ))
        }
    };
    let start = Instant::now();
    let mut outcome = brute_force_solve(&inst, &bx).map_err(|e| Failure::Other(e.to_string()))?;
    if inst.upper().is_none() && outcome.solution().is_some() && lp_ray_exists(&inst) {
        outcome = SolveOutcome::Unbounded;
    }
    let report = SolveReport {
        outcome,
        stats: Default::default(),
    };
    Ok(emit(&report, start, "oracle"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { path, algorithm } => cmd_solve(&path, algorithm.into()),
        Command::Feasible { path } => cmd_feasible(&path),
        Command::Bounds { path } => cmd_bounds(&path),
        Command::Steinitz { path } => cmd_steinitz(&path),
        Command::Gen { m, n, delta, seed, bounded } => cmd_gen(m, n, delta, seed, bounded),
        Command::Oracle { path, limit } => cmd_oracle(&path, limit),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
