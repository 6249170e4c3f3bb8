//! `gabp`: solve, diagnose, benchmark and trace symmetric linear systems.
//!
//! Exit status is 0 on success, 2 when a solve does not converge (the
//! best-effort iterate is still printed), and 1 on usage, parse or I/O
//! errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gabp_core::cdma::{bench_table1, CorrelationFixture, FixtureName};
use gabp_core::classical::Omega;
use gabp_core::io::{read_matrix_market, read_vector};
use gabp_core::method::{initial_iterate, run_method, BaseMethod, MethodSpec, RunOptions};
use gabp_core::{diagnose, SolveResult, SolveStatus, SymmetricSparseMatrix};

#[derive(Parser)]
#[command(name = "gabp", version, about = "Gaussian belief propagation and classical iterative solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve A·x = b and print x, iterations, status and residual.
    Solve(SolveArgs),
    /// Report the sufficient conditions for GaBP convergence.
    Diagnose(DiagnoseArgs),
    /// Iteration counts of every method on the R3 and R4 correlation fixtures.
    Bench(BenchArgs),
    /// Write the iterate after every iteration as CSV (row 0 is the start).
    Trace(SolveArgs),
}

#[derive(Args)]
struct SystemArgs {
    /// Matrix Market file (coordinate real symmetric or general).
    #[arg(long, conflicts_with = "fixture")]
    matrix: Option<PathBuf>,
    /// Right-hand side, one value per line or single-column CSV. Defaults to all ones with --fixture.
    #[arg(long)]
    rhs: Option<PathBuf>,
    /// Embedded correlation fixture (R3 or R4) in place of --matrix.
    #[arg(long, value_parser = parse_fixture)]
    fixture: Option<FixtureName>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// jacobi, gs, sor, gabp-parallel or gabp-serial, optionally with +steffensen.
    #[arg(long, default_value = "gabp-serial", value_parser = parse_method)]
    method: MethodSpec,
    #[command(flatten)]
    tuning: Tuning,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Tuning {
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Message schedule for GaBP methods; overrides the one implied by --method.
    #[arg(long, value_enum)]
    schedule: Option<ScheduleArg>,
    /// SOR relaxation weight, a number in (0, 2) or "auto".
    #[arg(long, default_value = "auto", value_parser = parse_omega)]
    omega: Omega,
    /// GaBP message damping weight in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    damping: f64,
    /// Reserved; no current command uses randomness.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScheduleArg {
    Parallel,
    Serial,
}

fn parse_method(s: &str) -> Result<MethodSpec, String> {
    s.parse::<MethodSpec>().map_err(|e| e.to_string())
}

fn parse_fixture(s: &str) -> Result<FixtureName, String> {
    s.parse::<FixtureName>().map_err(|e| e.to_string())
}

fn parse_omega(s: &str) -> Result<Omega, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Omega::Auto);
    }
    s.parse::<f64>().map(Omega::Fixed).map_err(|_| format!("expected a number or \"auto\", got '{s}'"))
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn load_system(args: &SystemArgs) -> Result<(SymmetricSparseMatrix, Vec<f64>), Failure> {
    let a = match (&args.matrix, args.fixture) {
        (Some(path), _) => read_matrix_market(path)?,
        (None, Some(name)) => CorrelationFixture::load(name).matrix,
        (None, None) => return Err(Failure("one of --matrix or --fixture is required".into())),
    };
    let b = match &args.rhs {
        Some(path) => read_vector(path)?,
        None if args.fixture.is_some() => vec![1.0; a.dim()],
        None => return Err(Failure("--rhs is required with --matrix".into())),
    };
    if b.len() != a.dim() {
        let origin = args.rhs.as_ref().map_or_else(|| "rhs".to_string(), |p| p.display().to_string());
        return Err(Failure(format!("{origin}: expected {} values to match the matrix, found {}", a.dim(), b.len())));
    }
    Ok((a, b))
}

fn load_matrix(args: &SystemArgs) -> Result<SymmetricSparseMatrix, Failure> {
    match (&args.matrix, args.fixture) {
        (Some(path), _) => Ok(read_matrix_market(path)?),
        (None, Some(name)) => Ok(CorrelationFixture::load(name).matrix),
        (None, None) => Err(Failure("one of --matrix or --fixture is required".into())),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn effective_method(spec: MethodSpec, schedule: Option<ScheduleArg>) -> MethodSpec {
    match (spec.is_gabp(), schedule) {
        (true, Some(ScheduleArg::Parallel)) => MethodSpec { base: BaseMethod::GabpParallel, ..spec },
        (true, Some(ScheduleArg::Serial)) => MethodSpec { base: BaseMethod::GabpSerial, ..spec },
        _ => spec,
    }
}

fn solve(args: &SolveArgs, record_trajectory: bool) -> Result<(MethodSpec, SymmetricSparseMatrix, Vec<f64>, SolveResult), Failure> {
    let (a, b) = load_system(&args.system)?;
    let method = effective_method(args.method, args.tuning.schedule);
    let opts = RunOptions {
        epsilon: args.tuning.epsilon,
        max_iters: args.tuning.max_iters,
        omega: args.tuning.omega,
        damping: args.tuning.damping,
        record_trajectory,
    };
    let result = run_method(&a, &b, method, &opts)?;
    Ok((method, a, b, result))
}

fn status_line(status: &SolveStatus) -> String {
    match status {
        SolveStatus::Converged => "converged".into(),
        SolveStatus::MaxItersExceeded => "not converged (max iterations exceeded)".into(),
        SolveStatus::Diverged(why) => format!("not converged (diverged: {why})"),
    }
}

fn cmd_solve(args: &SolveArgs) -> CmdResult {
    let (method, _, _, r) = solve(args, false)?;
    let text = match args.format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "method: {method}");
            let _ = writeln!(s, "status: {}", status_line(&r.status));
            let _ = writeln!(s, "converged: {}", r.converged());
            let _ = writeln!(s, "iterations: {}", r.iterations);
            let _ = writeln!(s, "rounds: {}", r.rounds);
            let _ = writeln!(s, "residual_inf: {:e}", r.residual_inf);
            let _ = writeln!(s, "x:");
            for (i, v) in r.x.iter().enumerate() {
                let _ = writeln!(s, "  x_{} = {v:.17e}", i + 1);
            }
            s
        }
        Format::Json => {
            let mut value = serde_json::to_value(&r)?;
            value["method"] = serde_json::Value::String(method.to_string());
            value["converged"] = serde_json::Value::Bool(r.converged());
            serde_json::to_string_pretty(&value)? + "\n"
        }
        Format::Csv => r.x.iter().enumerate().fold(String::from("index,x\n"), |mut s, (i, v)| {
            let _ = writeln!(s, "{},{v:.17e}", i + 1);
            s
        }),
    };
    emit(&args.out, &text)?;
    Ok(if r.converged() { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn cmd_diagnose(args: &DiagnoseArgs) -> CmdResult {
    let a = load_matrix(&args.system)?;
    let report = diagnose(&a);
    let text = match args.format {
        Format::Json => {
            let mut value = serde_json::to_value(&report)?;
            value["verdict"] = serde_json::Value::String(report.verdict().into());
            serde_json::to_string_pretty(&value)? + "\n"
        }
        Format::Csv => format!(
            "strictly_diagonally_dominant,spectral_radius,spectral_radius_converged,is_tree,verdict\n{},{},{},{},{}\n",
            report.strictly_diagonally_dominant,
            report.spectral_radius_estimate,
            report.spectral_radius_converged,
            report.is_tree,
            report.verdict()
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "strictly diagonally dominant: {}", report.strictly_diagonally_dominant);
            let _ = writeln!(s, "spectral radius rho(|I-A|): {:.6}", report.spectral_radius_estimate);
            if !report.spectral_radius_converged {
                let _ = writeln!(s, "warning: power iteration stopped after {} steps without converging", report.power_iterations_used);
            }
            let _ = writeln!(s, "tree: {}", report.is_tree);
            let _ = writeln!(s, "verdict: {}", report.verdict());
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: &BenchArgs) -> CmdResult {
    let report = bench_table1(args.epsilon, args.max_iters);
    let text = match args.format {
        Format::Text => report.to_text(),
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => report.to_csv(),
    };
    emit(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_trace(args: &SolveArgs) -> CmdResult {
    let (_, a, b, r) = solve(args, true)?;
    let n = a.dim();
    let mut s = String::from("iter");
    for i in 1..=n {
        let _ = write!(s, ",x_{i}");
    }
    s.push('\n');
    let start = initial_iterate(&a, &b)?;
    let rows = std::iter::once(&start).chain(r.trajectory.iter().flatten());
    for (k, x) in rows.enumerate() {
        let _ = write!(s, "{k}");
        for v in x {
            let _ = write!(s, ",{v:.17e}");
        }
        s.push('\n');
    }
    emit(&args.out, &s)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Diagnose(args) => cmd_diagnose(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Trace(args) => cmd_trace(args),
    };
    outcome.unwrap_or_else(|Failure(msg)| {
        eprintln!("error: {msg}");
        ExitCode::from(1)
    })
}
