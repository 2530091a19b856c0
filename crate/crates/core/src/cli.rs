//! Command-line front end for the `little` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{bound_report, BoundReport, XI_SK};
use crate::error::Error;
use crate::harness::{
    run_trials, sk_comparison_report, sweep, universality_compare, ExperimentConfig, Problem, SweepAxis,
    SweepResult,
};
use crate::instance::{generate_instance, symmetrize, Distribution, SpinAssignment};
use crate::report::{self, Format, Results, TrialReport};
use crate::solvers::{solve_max, solve_minmax, solve_sk, GroundStateResult, SolverLimits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "little", version, about = "Ground-state energies of the asymmetric Little model")]
pub struct Cli {
    /// Print timings to stderr.
    #[arg(long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate all asymptotic bounds at one aspect ratio.
    Bounds(BoundsArgs),
    /// Exactly solve one generated instance.
    Solve(SolveArgs),
    /// Monte Carlo average of scaled ground-state energies.
    Experiment(ExperimentArgs),
    /// Repeat an experiment along n or alpha.
    Sweep(SweepArgs),
    /// Compare Gaussian and Bernoulli disorder for the max form.
    Universality(UniversalityArgs),
    /// Check the SK comparison inequality at finite n.
    SkCompare(SkCompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Max,
    Minmax,
    Sk,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Max => Problem::MaxLittle,
            ProblemArg::Minmax => Problem::MinmaxLittle,
            ProblemArg::Sk => Problem::Sk,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DistArg {
    Gaussian,
    Bernoulli,
}

impl From<DistArg> for Distribution {
    fn from(d: DistArg) -> Self {
        match d {
            DistArg::Gaussian => Distribution::Gaussian,
            DistArg::Bernoulli => Distribution::Bernoulli,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    N,
    Alpha,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = XI_SK)]
    pub xi_sk: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    /// Row count; ignored for `sk`.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = DistArg::Gaussian)]
    pub dist: DistArg,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    /// Row count; ignored for `sk`.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = DistArg::Gaussian)]
    pub dist: DistArg,
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, env = "LITTLE_WORKERS", default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = XI_SK)]
    pub xi_sk: f64,
    /// Write machine output here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> ExperimentConfig {
        let problem = Problem::from(self.problem);
        let m = if problem == Problem::Sk { self.n } else { self.m };
        ExperimentConfig::new(problem, m, self.n, self.dist.into(), self.trials, self.seed).with_workers(self.workers)
    }
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub axis: AxisArg,
    /// Comma-separated, strictly increasing axis values.
    #[arg(long)]
    pub values: String,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Also write plot-ready `value mean` data to this path.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UniversalityArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, env = "LITTLE_WORKERS", default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct SkCompareArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = XI_SK)]
    pub xi_sk: f64,
    #[arg(long, env = "LITTLE_WORKERS", default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Run(_) => EXIT_FAILURE,
        }
    }

    /// Single-line diagnostic.
    pub fn line(&self) -> String {
        match self {
            CliError::Usage(msg) => format!("little: error[usage]: {msg}"),
            CliError::Run(e) => format!("little: error[{}]: {}", e.kind(), e.to_string().replace('\n', " ")),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

fn unsupported(format: FormatArg, what: &str) -> CliError {
    CliError::Usage(format!("format {format:?} is not available for {what}").to_lowercase())
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable output");
    s.push('\n');
    s
}

fn bounds_text(b: &BoundReport) -> String {
    format!(
        "alpha {}\nxi_sk {}\nsk_lower {}\nrs_upper {}\nlowered_upper {}\nc3_star_upper {}\n\
         minmax_simple_lower {}\nminmax_lifted_lower {}\nc3_star_minmax {}\n",
        b.alpha,
        b.xi_sk,
        b.sk_lower,
        b.rs_upper,
        b.lowered_upper,
        b.c3_star_upper,
        b.minmax_simple_lower,
        b.minmax_lifted_lower,
        b.c3_star_minmax,
    )
}

fn bounds_csv(b: &BoundReport) -> String {
    format!(
        "alpha,xi_sk,sk_lower,rs_upper,lowered_upper,c3_star_upper,minmax_simple_lower,minmax_lifted_lower,c3_star_minmax\n\
         {},{},{},{},{},{},{},{},{}\n",
        b.alpha,
        b.xi_sk,
        b.sk_lower,
        b.rs_upper,
        b.lowered_upper,
        b.c3_star_upper,
        b.minmax_simple_lower,
        b.minmax_lifted_lower,
        b.c3_star_minmax,
    )
}

#[derive(Serialize)]
struct SolveOutput {
    problem: Problem,
    m: usize,
    n: usize,
    dist: Distribution,
    seed: u64,
    value: f64,
    scaled: f64,
    x: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<String>,
    configs_visited: u64,
}

impl SolveOutput {
    fn text(&self) -> String {
        let mut s = format!(
            "problem {}\nm {}\nn {}\ndist {}\nseed {}\nvalue {}\nscaled {}\nx {}\n",
            self.problem, self.m, self.n, self.dist, self.seed, self.value, self.scaled, self.x
        );
        if let Some(y) = &self.y {
            s.push_str(&format!("y {y}\n"));
        }
        s.push_str(&format!("configs_visited {}\n", self.configs_visited));
        s
    }
}

#[derive(Serialize)]
struct ExperimentOutput {
    trial_stats: TrialReport,
    bounds: BoundReport,
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io { path: p.clone(), source })?,
        None => out.write_all(text.as_bytes()).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })?,
    }
    Ok(())
}

fn run_solve(a: &SolveArgs) -> Result<String, CliError> {
    let problem = Problem::from(a.problem);
    let dist = Distribution::from(a.dist);
    let limits = SolverLimits::default();
    let m = if problem == Problem::Sk { a.n } else { a.m };
    let inst = generate_instance(m, a.n, dist, a.seed)?;
    let r: GroundStateResult = match problem {
        Problem::MaxLittle => solve_max(&inst, &limits)?,
        Problem::MinmaxLittle => solve_minmax(&inst, &limits)?,
        Problem::Sk => solve_sk(&symmetrize(&inst)?, &limits)?,
    };
    let out = SolveOutput {
        problem,
        m,
        n: a.n,
        dist,
        seed: a.seed,
        value: r.value,
        scaled: r.scaled,
        x: SpinAssignment::signs(&r.assignment.x),
        y: r.assignment.y.as_deref().map(SpinAssignment::signs),
        configs_visited: r.configs_visited,
    };
    match a.format {
        FormatArg::Json => Ok(json_line(&out)),
        FormatArg::Text => Ok(out.text()),
        f => Err(unsupported(f, "solve")),
    }
}

fn sweep_text(s: &SweepResult) -> String {
    let mut out = format!("{:>8} {:>6} {:>6} {:>12} {:>12} {:>12} {:>12}\n", s.axis.as_str(), "m", "n", "mean", "ci95", "rs_upper", "lifted");
    for p in &s.points {
        out.push_str(&format!(
            "{:>8} {:>6} {:>6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}\n",
            p.value, p.m, p.n, p.stats.mean, p.stats.ci95, p.bounds.rs_upper, p.bounds.minmax_lifted_lower
        ));
    }
    out
}

/// Runs one parsed invocation, writing primary output to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let start = Instant::now();
    match &cli.command {
        Command::Bounds(a) => {
            let b = bound_report(a.alpha, a.xi_sk)?;
            let text = match a.format {
                FormatArg::Json => json_line(&b),
                FormatArg::Csv => bounds_csv(&b),
                FormatArg::Text => bounds_text(&b),
            };
            emit(out, None, &text)?;
        }
        Command::Solve(a) => emit(out, None, &run_solve(a)?)?,
        Command::Experiment(a) => {
            if a.format == FormatArg::Csv {
                return Err(unsupported(a.format, "experiment"));
            }
            let cfg = a.run.config();
            let stats = run_trials(&cfg)?;
            let bounds = bound_report(cfg.alpha(), a.run.xi_sk)?;
            let report = TrialReport::new(&cfg, &stats);
            let text = match a.format {
                FormatArg::Json => json_line(&ExperimentOutput { trial_stats: report, bounds }),
                _ => format!(
                    "problem {}\nm {}\nn {}\ndist {}\ntrials {}\nseed {}\nmean {}\nstd {}\nci95 {}\n{}",
                    report.problem, report.m, report.n, report.dist, report.trials, report.seed,
                    report.mean, report.std, report.ci95, bounds_text(&bounds)
                ),
            };
            emit(out, a.run.output.as_ref(), &text)?;
        }
        Command::Sweep(a) => {
            let values = report::parse_value_list(&a.values).map_err(|e| CliError::Usage(e.to_string()))?;
            let axis = match a.axis {
                AxisArg::N => SweepAxis::N,
                AxisArg::Alpha => SweepAxis::Alpha,
            };
            let result = sweep(&a.run.config(), axis, &values, a.run.xi_sk)?;
            let text = match a.format {
                FormatArg::Csv => report::render(&Results::Sweep(&result), Format::Csv)?,
                FormatArg::Json => report::render(&Results::Sweep(&result), Format::Json)?,
                FormatArg::Text => sweep_text(&result),
            };
            emit(out, a.run.output.as_ref(), &text)?;
            if let Some(plot) = &a.plot {
                report::persist(&Results::Sweep(&result), plot, Format::Plot)?;
            }
        }
        Command::Universality(a) => {
            let r = universality_compare(a.m, a.n, a.trials, a.seed, a.workers)?;
            let text = match a.format {
                FormatArg::Json => json_line(&r),
                FormatArg::Text => format!(
                    "m {}\nn {}\ntrials {}\nseed {}\ngaussian_mean {}\ngaussian_ci95 {}\nbernoulli_mean {}\n\
                     bernoulli_ci95 {}\nmean_difference {}\nthreshold {}\ncompatible {}\nunderpowered {}\n",
                    r.m, r.n, r.trials, r.seed, r.gaussian.mean, r.gaussian.ci95, r.bernoulli.mean,
                    r.bernoulli.ci95, r.mean_difference, r.threshold, r.compatible, r.underpowered
                ),
                f => return Err(unsupported(f, "universality")),
            };
            emit(out, None, &text)?;
        }
        Command::SkCompare(a) => {
            let r = sk_comparison_report(a.n, a.trials, a.seed, a.xi_sk, a.workers)?;
            let text = match a.format {
                FormatArg::Json => json_line(&r),
                FormatArg::Text => format!(
                    "n {}\ntrials {}\nseed {}\nxi_sk {}\nbilinear_mean {}\nrow_quadratic_mean {}\n\
                     col_quadratic_mean {}\nquadratic_sum_mean {}\ncombined_ci95 {}\nmargin {}\nholds {}\n\
                     asymptotic_lower {}\n",
                    r.n, r.trials, r.seed, r.xi_sk, r.bilinear.mean, r.row_quadratic.mean,
                    r.col_quadratic.mean, r.quadratic_sum.mean, r.combined_ci95, r.margin, r.holds,
                    r.asymptotic_lower
                ),
                f => return Err(unsupported(f, "sk-compare")),
            };
            emit(out, None, &text)?;
        }
    }
    if cli.verbose {
        let _ = writeln!(err, "little: elapsed {:.3}s", start.elapsed().as_secs_f64());
    }
    Ok(())
}

/// Parses `argv` and runs it; returns the process exit code.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let msg = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(err, "{}", CliError::Usage(msg.to_string()).line());
            return EXIT_USAGE;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "{}", e.line());
            e.exit_code()
        }
    }
}
