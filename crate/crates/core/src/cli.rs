//! The `procure` command line.
//!
//! Exit codes: 0 success, 1 invalid input or failed audit, 2 infeasible,
//! 3 search or enumeration budget exceeded, 64 usage error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::audit::micro_audit;
use crate::baselines::{compare_suite, AnnealingConfig};
use crate::error::SolveError;
use crate::io::{
    generate_instance, generate_suite, parse_grid, read_instance, sweep, write_comparison,
    write_instance, write_solve_report, write_sweep, InstanceError, LARGE_SUITE_SIZES,
    SMALL_SUITE_SIZES,
};
use crate::model::ProcurementInstance;
use crate::planner::{Beam, SearchConfig};
use crate::pso::{run, LowerSolver, SwarmConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "procure", version, about = "Bi-level procurement: swarm allocation over planned supplier responses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the swarm on one instance and write the trace and allocation.
    Solve(SolveArgs),
    /// Write a random instance, or a whole comparison suite.
    Generate(GenerateArgs),
    /// Compare planners inside the swarm on every instance of a directory.
    Compare(CompareArgs),
    /// Objective over a grid of procurement weights and delay factors.
    Sweep(SweepArgs),
    /// Check the planner against brute-force enumeration on micro cases.
    Audit(AuditArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverKind {
    Astar,
    Greedy,
    Sa,
}

#[derive(Debug, Clone, Args)]
struct PlannerArgs {
    /// Open-list size of the A* planner, or `unbounded`.
    #[arg(long, default_value = "50", value_parser = parse_beam)]
    beam: Beam,
    /// Spacing of enumerated production volumes.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    stride: u32,
}

impl PlannerArgs {
    fn solver(&self, kind: SolverKind) -> LowerSolver {
        match kind {
            SolverKind::Astar => LowerSolver::AStar(SearchConfig {
                beam: self.beam,
                stride: self.stride,
                expansion_limit: None,
            }),
            SolverKind::Greedy => LowerSolver::Greedy { stride: self.stride },
            SolverKind::Sa => LowerSolver::Annealing {
                config: AnnealingConfig::default(),
                stride: self.stride,
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
struct SwarmArgs {
    #[arg(long, env = "BILEVEL_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    particles: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    iters: u64,
}

impl SwarmArgs {
    fn config(&self) -> SwarmConfig {
        SwarmConfig {
            particles: self.particles as usize,
            iterations: self.iters as usize,
            seed: self.seed,
            ..SwarmConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "astar")]
    solver: SolverKind,
    #[command(flatten)]
    planner: PlannerArgs,
    #[command(flatten)]
    swarm: SwarmArgs,
    /// Procurement weight; the shortage weight becomes `1 − w1`.
    #[arg(long)]
    w1: Option<f64>,
    /// Delay factor applied to every supplier.
    #[arg(long)]
    gamma: Option<f64>,
    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the suppliers' plans as JSON.
    #[arg(long)]
    plans: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteKind {
    Small,
    Large,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, required_unless_present = "suite", conflicts_with = "suite")]
    suppliers: Option<usize>,
    #[arg(long, required_unless_present = "suite", conflicts_with = "suite")]
    items: Option<usize>,
    /// Write every instance of a comparison suite into the `--out` directory.
    #[arg(long, value_enum)]
    suite: Option<SuiteKind>,
    #[arg(long, env = "BILEVEL_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Directory of instance files, taken in file-name order.
    #[arg(long)]
    suite: PathBuf,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "astar,greedy,sa")]
    solvers: Vec<SolverKind>,
    #[command(flatten)]
    planner: PlannerArgs,
    #[command(flatten)]
    swarm: SwarmArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    instance: PathBuf,
    #[arg(long, default_value = "0:1:0.1")]
    w1: String,
    #[arg(long, default_value = "0.8:0.97:0.01")]
    gamma: String,
    #[arg(long, value_enum, default_value = "astar")]
    solver: SolverKind,
    #[command(flatten)]
    planner: PlannerArgs,
    #[command(flatten)]
    swarm: SwarmArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AuditArgs {
    /// Audit the random micro cases (the only suite there is).
    #[arg(long)]
    micro_suite: bool,
    #[arg(long, default_value_t = 200)]
    seeds: u64,
    /// First seed of the audited range.
    #[arg(long, default_value_t = 0)]
    first_seed: u64,
}

fn parse_beam(s: &str) -> Result<Beam, String> {
    if s.eq_ignore_ascii_case("unbounded") {
        return Ok(Beam::Unbounded);
    }
    match s.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(Beam::Bounded(k)),
        _ => Err(format!("expected a positive integer or `unbounded`, got `{s}`")),
    }
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let code = match e {
            SolveError::Infeasible(_) => EXIT_INFEASIBLE,
            SolveError::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        let message = match &e {
            InstanceError::Invalid(list) => {
                let mut m = String::from("instance failed validation:");
                for v in list {
                    m.push_str("\n  ");
                    m.push_str(&v.to_string());
                }
                m
            }
            other => other.to_string(),
        };
        Self::invalid(message)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::invalid(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self::invalid(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command. Reports go to
/// `stdout` unless a path is given; diagnostics go to `stderr`.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a, stdout, stderr),
        Command::Generate(a) => generate(a, stderr),
        Command::Compare(a) => compare(a, stdout, stderr),
        Command::Sweep(a) => sweep_cmd(a, stdout, stderr),
        Command::Audit(a) => audit(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Writes through a file when `path` is set, else into `stdout`.
fn emit(path: Option<&Path>, stdout: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<(), Failure>) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(|e| Failure::invalid(format!("{}: {e}", p.display())))?);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn load(path: &Path) -> Result<ProcurementInstance, Failure> {
    read_instance(path).map_err(Failure::from)
}

fn solve(a: SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let mut inst = load(&a.instance)?;
    if let Some(w1) = a.w1 {
        if !(0.0..=1.0).contains(&w1) {
            return Err(Failure::invalid(format!("--w1 {w1} is outside [0, 1]")));
        }
        inst = inst.with_procurement_weight(w1);
    }
    if let Some(gamma) = a.gamma {
        if !(gamma >= 0.0) {
            return Err(Failure::invalid(format!("--gamma {gamma} is negative")));
        }
        inst = inst.with_supplier_delay_factor(gamma);
    }
    let cfg = a.swarm.config();
    let report = run(&inst, &cfg, a.planner.solver(a.solver))?;
    emit(a.out.as_deref(), stdout, |w| Ok(write_solve_report(w, &report, &inst)?))?;
    if let Some(path) = &a.plans {
        let json = serde_json::to_string_pretty(&report.plans).map_err(|e| Failure::invalid(e.to_string()))?;
        fs::write(path, json + "\n")?;
    }
    let _ = writeln!(
        stderr,
        "{}: objective {} after {} subproblem solves in {:.2} s",
        report.solver,
        crate::io::fixed(report.objective.total),
        report.subproblem_solves,
        report.wall_seconds
    );
    if report.is_feasible() {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(stderr, "error: no feasible allocation found");
        Ok(EXIT_INFEASIBLE)
    }
}

fn generate(a: GenerateArgs, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match a.suite {
        Some(kind) => {
            let (prefix, sizes): (&str, &[(usize, usize)]) = match kind {
                SuiteKind::Small => ("small", &SMALL_SUITE_SIZES),
                SuiteKind::Large => ("large", &LARGE_SUITE_SIZES),
            };
            fs::create_dir_all(&a.out)?;
            for (k, file) in generate_suite(sizes, a.seed).iter().enumerate() {
                let (n, m) = sizes[k];
                let path = a.out.join(format!("{prefix}-{:02}-{n}x{m}.json", k + 1));
                write_instance(&path, file)?;
            }
            let _ = writeln!(stderr, "wrote {} instances to {}", sizes.len(), a.out.display());
        }
        None => {
            let (n, m) = (a.suppliers.unwrap_or(1), a.items.unwrap_or(1));
            if n == 0 || m == 0 {
                return Err(Failure::invalid("--suppliers and --items must be at least 1"));
            }
            write_instance(&a.out, &generate_instance(n, m, a.seed))?;
        }
    }
    Ok(EXIT_OK)
}

fn compare(a: CompareArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let mut paths: Vec<PathBuf> = fs::read_dir(&a.suite)
        .map_err(|e| Failure::invalid(format!("{}: {e}", a.suite.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::invalid(format!("no .json instances in {}", a.suite.display())));
    }
    let problems = paths.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
    let solvers: Vec<LowerSolver> = a.solvers.iter().map(|&k| a.planner.solver(k)).collect();
    let rows = compare_suite(&problems, &solvers, a.reps as usize, &a.swarm.config(), a.swarm.seed)?;
    emit(a.out.as_deref(), stdout, |w| Ok(write_comparison(w, &rows)?))?;
    let _ = writeln!(stderr, "compared {} problems", rows.len());
    Ok(EXIT_OK)
}

fn sweep_cmd(a: SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let inst = load(&a.instance)?;
    let w1s = parse_grid(&a.w1).map_err(Failure::invalid)?;
    let gammas = parse_grid(&a.gamma).map_err(Failure::invalid)?;
    let points = sweep(&inst, &w1s, &gammas, &a.swarm.config(), a.planner.solver(a.solver))?;
    emit(a.out.as_deref(), stdout, |w| Ok(write_sweep(w, &points)?))?;
    let _ = writeln!(stderr, "{} grid points", points.len());
    Ok(EXIT_OK)
}

fn audit(a: AuditArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    if !a.micro_suite {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "nothing to audit; pass --micro-suite".into(),
        });
    }
    let report = micro_audit(a.first_seed..a.first_seed + a.seeds)?;
    writeln!(
        stdout,
        "cases {}  exact {}  both infeasible {}  mismatches {}  states {}  overestimates {}",
        report.cases,
        report.exact,
        report.infeasible,
        report.mismatches.len(),
        report.states_checked,
        report.overestimates.len()
    )?;
    for seed in &report.mismatches {
        writeln!(stdout, "mismatch: seed {seed}")?;
    }
    for (seed, t, inv, rem, h, v) in &report.overestimates {
        writeln!(stdout, "overestimate: seed {seed} state ({t}, {inv}, {rem}) h {h} > {v}")?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_INVALID })
}
