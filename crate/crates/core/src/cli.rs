//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage and input errors, 2 when the
//! numerics fail (rank deficiency, every trial failing, or a deterministic
//! check not holding).

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Result, RnlaError};
use crate::harness::experiment::{
    run_experiment, Algorithm, CheckSuite, ExperimentConfig, InstanceSpec, Params,
};
use crate::harness::gen::{gen_matrix, FamilyParams, MatrixFamily};
use crate::harness::io::{write_matrix, write_vector};
use crate::harness::report::Report;
use crate::sampling::ProbKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "rnla",
    version,
    about = "Seeded randomized linear algebra experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a test matrix (and right-hand side) to a file.
    Gen(GenArgs),
    /// Approximate A B by column/row sampling.
    Matmul(MatmulArgs),
    /// Sketch-and-solve least squares.
    Lsq(LsqArgs),
    /// Rank-k approximation from a column sketch.
    Lowrank(LowrankArgs),
    /// Run a diagnostic suite.
    Check(CheckArgs),
    /// Re-render a saved JSON report.
    Report(ReportArgs),
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// gaussian, lowrank_plus_noise, coherent, consistent_lsq or noisy_lsq.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    decay: Option<f64>,
    #[arg(long)]
    tail: Option<f64>,
    #[arg(long)]
    noise: Option<f64>,
}

impl FamilyArgs {
    fn params(&self) -> FamilyParams {
        FamilyParams {
            m: self.m,
            n: self.n,
            d: self.d,
            rank: self.rank,
            decay: self.decay,
            tail: self.tail,
            noise: self.noise,
        }
    }

    fn family(&self) -> Result<Option<MatrixFamily>> {
        self.family
            .as_deref()
            .map(|name| MatrixFamily::from_parts(name, &self.params()))
            .transpose()
    }
}

#[derive(Args, Debug, Clone)]
struct InstanceArgs {
    /// Matrix file (MatrixMarket array or binary).
    #[arg(long = "in", value_name = "PATH", conflicts_with = "family")]
    input: Option<PathBuf>,
    #[command(flatten)]
    family: FamilyArgs,
    /// Seed for a generated instance.
    #[arg(long, default_value_t = 0)]
    instance_seed: u64,
}

impl InstanceArgs {
    fn spec(&self, second: Option<PathBuf>) -> Result<Option<InstanceSpec>> {
        if let Some(a) = &self.input {
            return Ok(Some(InstanceSpec::Files {
                a: a.clone(),
                b: second,
            }));
        }
        Ok(self.family.family()?.map(|generator| InstanceSpec::Generated {
            generator,
            seed: self.instance_seed,
        }))
    }

    fn required_spec(&self, second: Option<PathBuf>) -> Result<InstanceSpec> {
        self.spec(second)?
            .ok_or_else(|| RnlaError::param("instance", "missing", "pass --in PATH or --family NAME"))
    }
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Base seed; trial t uses seed + t.
    #[arg(long, env = "RNLA_SEED", default_value_t = 0)]
    seed: u64,
    /// Record theoretical bounds and condition checks per trial.
    #[arg(long)]
    diagnostics: bool,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the flattened aggregate as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, env = "RNLA_SEED", default_value_t = 0)]
    seed: u64,
    /// Output path; a `.bin` extension selects the binary format.
    #[arg(long)]
    out: PathBuf,
    /// Where to write b for the least-squares families.
    #[arg(long)]
    rhs_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MatmulArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Second factor; defaults to A^T.
    #[arg(long)]
    b: Option<PathBuf>,
    #[arg(long)]
    c: usize,
    #[arg(long, default_value = "optimal")]
    probs: ProbKind,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct LsqArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Right-hand side vector file.
    #[arg(long)]
    rhs: Option<PathBuf>,
    #[arg(long)]
    eps: f64,
    /// Sketch size; the theoretical size when omitted.
    #[arg(long)]
    r: Option<usize>,
    /// Repeat and keep the best residual to reach failure probability delta.
    #[arg(long)]
    delta: Option<f64>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct LowrankArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    eps: f64,
    /// Sketch width; the theoretical size when omitted.
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    c0: Option<f64>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct CheckArgs {
    suite: CheckSuite,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    probs: Option<ProbKind>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Rewrite the report as normalized JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config(
    algorithm: Algorithm,
    instance: Option<InstanceSpec>,
    params: Params,
    run: &RunArgs,
) -> ExperimentConfig {
    ExperimentConfig {
        algorithm,
        instance,
        params,
        trials: run.trials,
        base_seed: run.seed,
        diagnostics: run.diagnostics,
    }
}

/// Instance used by a check suite when none is named on the command line.
fn default_check_instance(args: &CheckArgs) -> Result<Option<InstanceSpec>> {
    if let Some(spec) = args.instance.spec(None)? {
        return Ok(Some(spec));
    }
    let f = &args.instance.family;
    let n = || {
        f.n.ok_or_else(|| RnlaError::param("n", "missing", "required by this suite"))
    };
    let generator = match args.suite {
        CheckSuite::Srht | CheckSuite::Unbiased => return Ok(None),
        CheckSuite::Coherence => MatrixFamily::Coherent {
            n: n()?,
            d: f.d.unwrap_or(4),
        },
        CheckSuite::Gram => MatrixFamily::Gaussian {
            m: n()?,
            n: f.d.unwrap_or(4),
        },
        CheckSuite::Structural => MatrixFamily::Gaussian {
            m: f.m.unwrap_or(n()?),
            n: n()?,
        },
    };
    Ok(Some(InstanceSpec::Generated {
        generator,
        seed: args.instance.instance_seed,
    }))
}

fn emit(report: &Report, run: &RunArgs) -> Result<()> {
    match &run.out {
        Some(path) => {
            report.write(path)?;
            print!("{}", report.summary());
        }
        None => print!("{}", report.to_json()?),
    }
    if let Some(path) = &run.csv {
        std::fs::write(path, report.aggregate_csv()).map_err(|source| RnlaError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(())
}

fn experiment_exit(report: &Report) -> i32 {
    let a = &report.aggregate;
    if a.completed == 0 {
        return EXIT_NUMERICAL;
    }
    let strict = report.config.algorithm == Algorithm::Check
        && report
            .config
            .params
            .suite
            .is_some_and(CheckSuite::is_deterministic);
    if strict && a.successes < a.trials {
        return EXIT_NUMERICAL;
    }
    EXIT_OK
}

fn run_and_emit(config: ExperimentConfig, run: &RunArgs) -> Result<i32> {
    let report = run_experiment(&config)?;
    emit(&report, run)?;
    let code = experiment_exit(&report);
    if code != EXIT_OK {
        eprintln!(
            "numerical failure: {} of {} trials met the bound, {} failed",
            report.aggregate.successes, report.aggregate.trials, report.aggregate.failed
        );
    }
    Ok(code)
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Gen(args) => {
            let family = args
                .family
                .family()?
                .ok_or_else(|| RnlaError::param("family", "missing", "pass --family NAME"))?;
            let inst = gen_matrix(&family, args.seed)?;
            write_matrix(&args.out, &inst.a)?;
            println!(
                "wrote {} ({}x{})",
                args.out.display(),
                inst.a.rows(),
                inst.a.cols()
            );
            match (&args.rhs_out, &inst.b) {
                (Some(path), Some(b)) => {
                    write_vector(path, b)?;
                    println!("wrote {} ({})", path.display(), b.len());
                }
                (Some(_), None) => {
                    return Err(RnlaError::param(
                        "rhs-out",
                        family.name(),
                        "family has no right-hand side",
                    ))
                }
                _ => {}
            }
            Ok(EXIT_OK)
        }
        Command::Matmul(args) => {
            let instance = args.instance.required_spec(args.b.clone())?;
            let params = Params {
                c: Some(args.c),
                eps: args.eps,
                beta: args.beta,
                probs: Some(args.probs),
                ..Params::default()
            };
            run_and_emit(
                config(Algorithm::Matmul, Some(instance), params, &args.run),
                &args.run,
            )
        }
        Command::Lsq(args) => {
            if args.instance.input.is_some() && args.rhs.is_none() {
                return Err(RnlaError::param("rhs", "missing", "pass --rhs PATH with --in"));
            }
            let instance = args.instance.required_spec(args.rhs.clone())?;
            let params = Params {
                eps: Some(args.eps),
                r: args.r,
                delta: args.delta,
                ..Params::default()
            };
            run_and_emit(
                config(Algorithm::Lsq, Some(instance), params, &args.run),
                &args.run,
            )
        }
        Command::Lowrank(args) => {
            let instance = args.instance.required_spec(None)?;
            let params = Params {
                k: Some(args.k),
                eps: Some(args.eps),
                c: args.c,
                c0: args.c0,
                ..Params::default()
            };
            run_and_emit(
                config(Algorithm::Lowrank, Some(instance), params, &args.run),
                &args.run,
            )
        }
        Command::Check(args) => {
            let instance = default_check_instance(&args)?;
            let params = Params {
                suite: Some(args.suite),
                n: args.instance.family.n,
                r: args.r,
                c: args.c,
                k: args.k,
                probs: args.probs,
                ..Params::default()
            };
            run_and_emit(config(Algorithm::Check, instance, params, &args.run), &args.run)
        }
        Command::Report(args) => {
            let report = Report::read(&args.input)?;
            print!("{}", report.summary());
            if let Some(path) = &args.csv {
                std::fs::write(path, report.aggregate_csv()).map_err(|source| RnlaError::Io {
                    path: path.clone(),
                    source,
                })?;
            }
            if let Some(path) = &args.out {
                report.write(path)?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_USAGE
            }
        }
    }
}
