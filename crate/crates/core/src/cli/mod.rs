//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 inconclusive.

pub mod suites;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constructions::{self, RationalCaseParams};
use crate::density::{self, DEFAULT_GRID, DEFAULT_WINDOW_FRACTION};
use crate::error::Error;
use crate::greedy;
use crate::numeric::{parse_density, DensityTarget, Theta};
use crate::oracle;
use crate::sets::kernel::WORD_BITS;
use crate::sets::{FiniteSet, GroundSet};
use suites::Check;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

const SCHEMA: u32 = 1;
const DEFAULT_HORIZON: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "sumset-density",
    version,
    about = "Sets of naturals whose sumsets have a prescribed density"
)]
pub struct Cli {
    /// Horizon: sets are materialized on [0, N].
    #[arg(long = "N", global = true)]
    horizon: Option<u64>,
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Report format for density output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Rational,
    Beatty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    CaseA,
    CaseB,
    Greedy,
    Oracle,
    Auxiliary,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Greedy A with d(A + B) = alpha.
    Greedy {
        /// Comma-separated elements of the finite set B.
        #[arg(long = "B")]
        b: String,
        /// Target density as p/q or a finite decimal.
        #[arg(long)]
        alpha: String,
    },
    /// Explicit A with d(jA) = j·alpha/k.
    Construct {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        alpha: Option<String>,
        /// sqrt:d, quad:u,v,w,d or fixed:decimal,F.
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        k: u64,
    },
    /// A + B or jA of a stored set.
    Sumset {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "B", conflicts_with = "j")]
        b: Option<String>,
        #[arg(long)]
        j: Option<u32>,
        /// Write the packed binary format instead of text.
        #[arg(long)]
        binary: bool,
    },
    /// Density report of a stored set.
    Density {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WINDOW_FRACTION)]
        window: f64,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Run a verification suite and print a pass/fail table.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value = "sqrt:2")]
        theta: String,
        #[arg(long, default_value_t = 2)]
        k: u64,
        #[arg(long, default_value_t = 2)]
        j: u64,
        /// Defaults to 1/(8k).
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long = "B")]
        b: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = constructions::DEFAULT_WITNESS_CAP)]
        cap: u64,
        #[arg(long, default_value_t = 2019)]
        seed: u64,
    },
    /// Run the literal greedy oracle and compare with the fast builder.
    #[command(hide = true)]
    OracleCalibrate {
        #[arg(long = "B")]
        b: String,
        #[arg(long)]
        alpha: String,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_)
            | Error::Precision { .. }
            | Error::Overflow(_)
            | Error::ResidueIdentity { .. } => Failure::Runtime(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    #[serde(flatten)]
    body: &'a T,
}

#[derive(Serialize)]
struct BuildInfo {
    schema: u32,
    version: &'static str,
    word_bits: usize,
}

struct Context<'a> {
    horizon: Option<u64>,
    out_dir: PathBuf,
    format: Format,
    stdout: &'a mut dyn Write,
}

impl Context<'_> {
    fn horizon_or(&self, default: u64) -> Result<u64, Failure> {
        match self.horizon.unwrap_or(default) {
            0 => Err(Failure::Usage("horizon N must be positive".into())),
            n => Ok(n),
        }
    }

    fn prepare_out_dir(&self) -> Result<(), Failure> {
        fs::create_dir_all(&self.out_dir)?;
        let info = BuildInfo {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            word_bits: WORD_BITS,
        };
        write_json(&self.out_dir.join("build_info.json"), &info)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn write_report(
        &self,
        stem: &str,
        report: &density::DensityReport,
    ) -> Result<PathBuf, Failure> {
        match self.format {
            Format::Json => {
                let path = self.path(&format!("{stem}.json"));
                write_json(
                    &path,
                    &Envelope {
                        schema: SCHEMA,
                        body: report,
                    },
                )?;
                Ok(path)
            }
            Format::Csv => {
                let path = self.path(&format!("{stem}.csv"));
                report.write_csv(BufWriter::new(File::create(&path)?))?;
                Ok(path)
            }
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_set(path: &Path, set: &GroundSet, binary: bool) -> Result<(), Failure> {
    if binary {
        fs::write(path, set.to_bytes())?;
    } else {
        set.write_text(BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn read_set(path: &Path) -> Result<GroundSet, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let set = if bytes.starts_with(b"horizon=") {
        GroundSet::read_text(BufReader::new(&bytes[..]))?
    } else {
        GroundSet::from_bytes(&bytes)?
    };
    Ok(set)
}

fn parse_alpha(text: &str) -> Result<DensityTarget, Failure> {
    if text.contains(':') {
        return Err(Failure::Usage(format!(
            "alpha `{text}` looks like a theta; irrational targets use `construct --mode beatty --theta`"
        )));
    }
    Ok(parse_density(text)?)
}

fn parse_b(text: &str) -> Result<FiniteSet, Failure> {
    text.parse::<FiniteSet>()
        .map_err(|e| Failure::Usage(format!("--B `{text}`: {e}")))
}

/// Runs the CLI on `args` (including the program name), writing the
/// human-readable summary to `stdout`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut ctx = Context {
        horizon: cli.horizon,
        out_dir: cli.out_dir,
        format: cli.format,
        stdout,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(command: Command, ctx: &mut Context<'_>) -> Result<i32, Failure> {
    match command {
        Command::Greedy { b, alpha } => cmd_greedy(ctx, &b, &alpha),
        Command::Construct {
            mode,
            alpha,
            theta,
            k,
        } => cmd_construct(ctx, mode, alpha, theta, k),
        Command::Sumset {
            input,
            b,
            j,
            binary,
        } => cmd_sumset(ctx, &input, b, j, binary),
        Command::Density {
            input,
            window,
            grid,
        } => cmd_density(ctx, &input, window, grid),
        Command::Verify {
            suite,
            theta,
            k,
            j,
            epsilon,
            b,
            alpha,
            cap,
            seed,
        } => {
            let suite = Suite::from_str(&suite, true)
                .map_err(|_| Failure::Usage(format!("unknown suite `{suite}`")))?;
            cmd_verify(
                ctx,
                suite,
                VerifyArgs {
                    theta,
                    k,
                    j,
                    epsilon,
                    b,
                    alpha,
                    cap,
                    seed,
                },
            )
        }
        Command::OracleCalibrate { b, alpha } => cmd_oracle_calibrate(ctx, &b, &alpha),
    }
}

#[derive(Serialize)]
struct GreedyDiagnostics<'a> {
    b: &'a [u64],
    alpha: DensityTarget,
    horizon: u64,
    offset: u64,
    elements: usize,
    steps: &'a [greedy::GreedyStep],
}

fn cmd_greedy(ctx: &mut Context<'_>, b: &str, alpha: &str) -> Result<i32, Failure> {
    let b = parse_b(b)?;
    let alpha = parse_alpha(alpha)?;
    let horizon = ctx.horizon_or(DEFAULT_HORIZON)?;
    let build = greedy::build_greedy_traced(&b, alpha, horizon)?;
    ctx.prepare_out_dir()?;
    write_set(&ctx.path("greedy_A.txt"), &build.set, false)?;
    write_json(
        &ctx.path("greedy_steps.json"),
        &Envelope {
            schema: SCHEMA,
            body: &GreedyDiagnostics {
                b: b.elements(),
                alpha,
                horizon,
                offset: build.offset,
                elements: build.set.len(),
                steps: &build.steps,
            },
        },
    )?;
    let sums = build.set.sumset(&b);
    let report = density::density_report(&sums, DEFAULT_WINDOW_FRACTION, DEFAULT_GRID)?;
    let path = ctx.write_report("greedy_sumset_density", &report)?;
    writeln!(
        ctx.stdout,
        "greedy: |A ∩ [0,{horizon}]| = {}, (A+B)(N)/N = {:.6}, tail bracket [{:.6}, {:.6}], report {}",
        build.set.len(),
        sums.counting(horizon as i64)? as f64 / horizon as f64,
        report.tail_lower,
        report.tail_upper,
        path.display()
    )?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct RationalSummary<'a> {
    params: &'a RationalCaseParams,
    modulus: u64,
    densities: Vec<DensityTarget>,
}

fn cmd_construct(
    ctx: &mut Context<'_>,
    mode: Mode,
    alpha: Option<String>,
    theta: Option<String>,
    k: u64,
) -> Result<i32, Failure> {
    if k < 2 {
        return Err(Failure::Usage(format!("k must be at least 2, got {k}")));
    }
    match mode {
        Mode::Rational => {
            if theta.is_some() {
                return Err(Failure::Usage(
                    "rational mode takes --alpha, not --theta".into(),
                ));
            }
            let alpha = parse_alpha(
                alpha
                    .as_deref()
                    .ok_or_else(|| Failure::Usage("rational mode needs --alpha".into()))?,
            )?;
            let params = RationalCaseParams::from_target(alpha, k)?;
            let densities: Vec<DensityTarget> = (1..=k).map(|j| params.jfold_density(j)).collect();
            for (j, d) in (1..=k).zip(&densities) {
                writeln!(ctx.stdout, "d({j}A) = {d}")?;
            }
            ctx.prepare_out_dir()?;
            write_json(
                &ctx.path("construct_rational.json"),
                &Envelope {
                    schema: SCHEMA,
                    body: &RationalSummary {
                        params: &params,
                        modulus: params.modulus(),
                        densities,
                    },
                },
            )?;
            if let Some(horizon) = ctx.horizon {
                let set = params.periodic_set().materialize(horizon);
                write_set(&ctx.path("construct_A.txt"), &set, false)?;
            }
            Ok(EXIT_OK)
        }
        Mode::Beatty => {
            if alpha.is_some() {
                return Err(Failure::Usage(
                    "beatty mode takes --theta, not --alpha".into(),
                ));
            }
            let text = theta.ok_or_else(|| Failure::Usage("beatty mode needs --theta".into()))?;
            let theta = Theta::parse(&text)?;
            let horizon = ctx.horizon_or(DEFAULT_HORIZON)?;
            let a = constructions::beatty_construction(&theta, k, horizon)?;
            ctx.prepare_out_dir()?;
            write_set(&ctx.path("construct_A.txt"), &a, false)?;
            let alpha = 1.0 / theta.to_f64();
            let mut ja = a.clone();
            for j in 1..=k {
                if j > 1 {
                    ja = ja.sum(&a);
                }
                let report = density::density_report(&ja, DEFAULT_WINDOW_FRACTION, DEFAULT_GRID)?;
                ctx.write_report(&format!("construct_beatty_j{j}"), &report)?;
                writeln!(
                    ctx.stdout,
                    "j={j}: ({j}A)(N)/N = {:.6}, target j·alpha/k = {:.6}",
                    ja.counting(horizon as i64)? as f64 / horizon as f64,
                    j as f64 * alpha / k as f64
                )?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn cmd_sumset(
    ctx: &mut Context<'_>,
    input: &Path,
    b: Option<String>,
    j: Option<u32>,
    binary: bool,
) -> Result<i32, Failure> {
    let mut set = read_set(input)?;
    if let Some(h) = ctx.horizon {
        set = set.restrict(h)?;
    }
    let out = match (b, j) {
        (Some(b), None) => set.sumset(&parse_b(&b)?),
        (None, Some(j)) => set.iterated_sumset(j)?,
        _ => return Err(Failure::Usage("give exactly one of --B or --j".into())),
    };
    ctx.prepare_out_dir()?;
    let path = ctx.path(if binary { "sumset.bin" } else { "sumset.txt" });
    write_set(&path, &out, binary)?;
    writeln!(
        ctx.stdout,
        "sumset: {} elements on [0,{}] -> {}",
        out.len(),
        out.horizon(),
        path.display()
    )?;
    Ok(EXIT_OK)
}

fn cmd_density(
    ctx: &mut Context<'_>,
    input: &Path,
    window: f64,
    grid: usize,
) -> Result<i32, Failure> {
    let mut set = read_set(input)?;
    if let Some(h) = ctx.horizon {
        set = set.restrict(h)?;
    }
    let report = density::density_report(&set, window, grid)?;
    ctx.prepare_out_dir()?;
    let path = ctx.write_report("density", &report)?;
    writeln!(
        ctx.stdout,
        "density: tail bracket [{:.6}, {:.6}], report {}",
        report.tail_lower,
        report.tail_upper,
        path.display()
    )?;
    Ok(EXIT_OK)
}

struct VerifyArgs {
    theta: String,
    k: u64,
    j: u64,
    epsilon: Option<String>,
    b: Option<String>,
    alpha: Option<String>,
    cap: u64,
    seed: u64,
}

fn cmd_verify(ctx: &mut Context<'_>, suite: Suite, args: VerifyArgs) -> Result<i32, Failure> {
    let checks: Vec<Check> = match suite {
        Suite::CaseA => suites::case_a()?,
        Suite::CaseB => {
            let theta = Theta::parse(&args.theta)?;
            let epsilon = match &args.epsilon {
                Some(e) => parse_density(e)?,
                None => constructions::default_epsilon(args.k),
            };
            suites::case_b(
                &theta,
                args.j,
                args.k,
                epsilon,
                ctx.horizon_or(10_000)?,
                args.cap,
            )?
        }
        Suite::Greedy => {
            let horizon = ctx.horizon_or(10_000)?;
            let (mut bs, mut alphas) = suites::greedy_matrix();
            if let Some(b) = &args.b {
                bs = vec![parse_b(b)?];
            }
            if let Some(a) = &args.alpha {
                alphas = vec![parse_alpha(a)?];
            }
            let mut checks = Vec::new();
            for b in &bs {
                for &alpha in &alphas {
                    checks.extend(suites::greedy_cell(b, alpha, horizon)?);
                }
            }
            checks
        }
        Suite::Oracle => suites::oracle(args.seed)?,
        Suite::Auxiliary => suites::auxiliary(ctx.horizon_or(100_000)?, args.seed)?,
    };
    for c in &checks {
        writeln!(
            ctx.stdout,
            "{:<12} {}  {}",
            c.status.to_string(),
            c.name,
            c.detail
        )?;
    }
    Ok(suites::exit_code(&checks))
}

fn cmd_oracle_calibrate(ctx: &mut Context<'_>, b: &str, alpha: &str) -> Result<i32, Failure> {
    let b = parse_b(b)?;
    let alpha = parse_alpha(alpha)?;
    let horizon = ctx.horizon_or(500)?;
    let slow = oracle::naive_greedy(b.elements(), alpha.numer(), alpha.denom(), horizon);
    let fast = greedy::build_greedy(&b, alpha, horizon)?.elements();
    writeln!(ctx.stdout, "{slow:?}")?;
    if slow == fast {
        writeln!(ctx.stdout, "builder agrees")?;
        Ok(EXIT_OK)
    } else {
        writeln!(ctx.stdout, "builder disagrees: {fast:?}")?;
        Ok(EXIT_FAILURE)
    }
}
