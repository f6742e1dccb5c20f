use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use jordan_wlcp_core::pairs::{hlcp_degree, is_p_pair, is_r0_pair, MAX_DEGREE_N};
use jordan_wlcp_core::solver::geometric_schedule;
use jordan_wlcp_core::{path_trace, Error as CoreError, PairProblem, SolverConfig};

use crate::checks::{run_checks, CheckOptions};
use crate::error::{CliError, Result};
use crate::generate::{generate_instance, InstanceKind};
use crate::instance::parse_instance;
use crate::parallel::{solve_parallel, threads_from_env};
use crate::report::{to_json, Classification, DegreeFile, PathFile, PathLevel, ReportFile, Witness};

#[derive(Debug, Parser)]
#[command(name = "jordan-wlcp", version, about = "Weighted horizontal LCPs over Euclidean Jordan algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance and print a report (exit 1 when not converged).
    Solve {
        /// Instance file, or `-` for stdin.
        instance: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Attach the pair classification (ℝⁿ only).
        #[arg(long)]
        classify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// R₀ / degree / P-pair classification of the pair (ℝⁿ only).
    Classify {
        instance: PathBuf,
        #[command(flatten)]
        degree: DegreeArgs,
    },
    /// HLCP-degree of an R₀ pair on ℝⁿ.
    Degree {
        instance: PathBuf,
        #[command(flatten)]
        degree: DegreeArgs,
    },
    /// Follow the weight path t·w down a schedule, then solve at w = 0.
    Path {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Schedule::Geometric)]
        schedule: Schedule,
        #[arg(long, default_value_t = 13)]
        steps: usize,
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a seeded random instance on ℝⁿ.
    Gen {
        #[arg(long, value_enum)]
        kind: InstanceKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suites against an instance (exit 1 if any fails).
    Check {
        instance: PathBuf,
        /// Also verify that this report's residuals match a recomputation.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = CheckOptions::default().trials)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Schedule {
    /// t_k = ratio^k for k = 0..steps
    Geometric,
}

#[derive(Debug, Args)]
struct SolverArgs {
    #[arg(long, default_value_t = SolverConfig::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = SolverConfig::default().mu0)]
    mu0: f64,
    #[arg(long, default_value_t = SolverConfig::default().sigma)]
    sigma: f64,
    #[arg(long, default_value_t = SolverConfig::default().max_outer)]
    max_outer: usize,
    #[arg(long, default_value_t = SolverConfig::default().max_inner)]
    max_inner: usize,
    #[arg(long, default_value_t = SolverConfig::default().starts)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            tol: self.tol,
            mu0: self.mu0,
            sigma: self.sigma,
            max_outer: self.max_outer,
            max_inner: self.max_inner,
            starts: self.starts,
            seed: self.seed,
            ..SolverConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct DegreeArgs {
    /// Generic right-hand sides that must agree.
    #[arg(long, default_value_t = 3)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    let io = |source| CliError::Io { context: format!("cannot read {}", path.display()), source };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn load(path: &Path) -> Result<PairProblem> {
    parse_instance(&read_input(path)?)
}

fn emit(text: &str, dest: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match dest {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { context: format!("cannot write {}", p.display()), source }),
        None => out
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { context: "cannot write to stdout".into(), source }),
    }
}

fn require_rn(problem: &PairProblem) -> Result<()> {
    if problem.algebra().descriptor().is_rn() {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "pair classification is only available on rn instances, not {}",
            problem.algebra().descriptor()
        )))
    }
}

/// R₀ test, degree (when R₀ and small enough) and P-pair test.
pub fn classify(problem: &PairProblem, samples: usize, seed: u64) -> Result<Classification> {
    require_rn(problem)?;
    let (a, b) = (problem.a(), problem.b());
    let r0 = is_r0_pair(a, b)?;
    let degree = if r0.is_r0 && problem.algebra().dim() <= MAX_DEGREE_N {
        match hlcp_degree(a, b, samples, seed) {
            Ok(d) => Some(d.degree),
            // no trustworthy value: report null rather than fail the whole classification
            Err(CoreError::DegeneratePair { .. } | CoreError::NumericFailure { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let witness = r0.witness.map(|(x, y)| Witness { x: x.into_coords(), y: y.into_coords() });
    Ok(Classification { r0: r0.is_r0, degree, p_pair: Some(is_p_pair(a, b)?), witness })
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve { instance, solver, classify: with_class, out: dest } => {
            let problem = load(&instance)?;
            let config = solver.config();
            config.validate()?;
            let report = solve_parallel(&problem, &config, threads_from_env()?)?;
            let mut file = ReportFile::from_solve(&report);
            if with_class {
                file.classification = Some(classify(&problem, 3, 0)?);
            }
            emit(&to_json(&file), dest.as_deref(), out)?;
            Ok(if report.converged() { 0 } else { 1 })
        }
        Command::Classify { instance, degree } => {
            let problem = load(&instance)?;
            emit(&to_json(&classify(&problem, degree.samples, degree.seed)?), None, out)?;
            Ok(0)
        }
        Command::Degree { instance, degree } => {
            let problem = load(&instance)?;
            require_rn(&problem)?;
            let d = hlcp_degree(problem.a(), problem.b(), degree.samples, degree.seed)?;
            emit(&to_json(&DegreeFile::from(&d)), None, out)?;
            Ok(0)
        }
        Command::Path { instance, schedule: Schedule::Geometric, steps, ratio, solver, out: dest } => {
            let problem = load(&instance)?;
            let schedule = geometric_schedule(steps, ratio)?;
            let path = path_trace(&problem, &solver.config(), &schedule)?;
            let converged = path.levels.iter().all(|r| r.converged()) && path.limit.converged();
            let file = PathFile {
                levels: path
                    .schedule
                    .iter()
                    .zip(&path.levels)
                    .map(|(&t, r)| PathLevel { t, report: ReportFile::from_solve(r) })
                    .collect(),
                last_level_unweighted: path.last_level_unweighted.into(),
                limit: ReportFile::from_solve(&path.limit),
            };
            emit(&to_json(&file), dest.as_deref(), out)?;
            Ok(if converged { 0 } else { 1 })
        }
        Command::Gen { kind, n, seed, out: dest } => {
            let file = generate_instance(kind, n, seed)?;
            emit(&file.to_json(), dest.as_deref(), out)?;
            Ok(0)
        }
        Command::Check { instance, report, trials, seed } => {
            let problem = load(&instance)?;
            let report = report.map(|p| read_input(&p).and_then(|t| ReportFile::from_json(&t))).transpose()?;
            let summary = run_checks(&problem, report.as_ref(), &CheckOptions { trials, seed })?;
            emit(&to_json(&summary), None, out)?;
            Ok(if summary.passed { 0 } else { 1 })
        }
    }
}
