use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ultraspec::gelfand::{gelfand, gelfand_inverse, BElement, GelfandTable};
use ultraspec::json::{self, IntegrateRequest, NormReport};
use ultraspec::operator::Operator;
use ultraspec::theorems::spectral_decompose_diagonal;
use ultraspec::verify::{self, Params, DEFAULT_SAMPLES, DEFAULT_SEED};
use ultraspec::{Error, DEFAULT_PRECISION, DEFAULT_PRIME};

/// Non-Archimedean spectral theory at desk scale.
#[derive(Parser)]
#[command(name = "ultraspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded property suites and print one JSON report per suite.
    Verify(VerifyArgs),
    /// Adjoint of an operator for the form f_omega.
    Adjoint(Io),
    /// Operator norm, as {"norm":{"exponent":...}}.
    Norm(Io),
    /// Gelfand transform of a projector-algebra element, or its inverse.
    Gelfand {
        /// Read a Gelfand table and rebuild the element.
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Spectral integral of a step function: input {"pvm":...,"function":...}.
    Integrate(Io),
    /// Spectral decomposition of a diagonal operator.
    Decompose(Io),
}

#[derive(Args)]
struct Io {
    /// Input JSON file; standard input when absent.
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite id, or "all".
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long = "p", default_value_t = DEFAULT_PRIME)]
    prime: u32,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Upper bound on sampled dimensions.
    #[arg(long)]
    dim_max: Option<usize>,
    /// Print the suite ids and exit.
    #[arg(long)]
    list: bool,
    /// Print per-suite wall-clock times to standard error.
    #[arg(long)]
    timings: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Input(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn to_json(&self) -> serde_json::Value {
        let (kind, message) = match self {
            Failure::Input(e) => (e.kind(), e.to_string()),
            Failure::Io(e) => ("io", e.to_string()),
        };
        serde_json::json!({ "error": { "kind": kind, "message": message } })
    }
}

fn read_input(path: &Option<PathBuf>) -> io::Result<String> {
    match path {
        Some(p) => fs::read_to_string(p),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn write_lines(path: &Option<PathBuf>, lines: &[String]) -> io::Result<()> {
    let mut text = lines.join("\n");
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Reads one value, transforms it and writes the result as one line.
fn transform<I, O>(io: &Io, f: impl FnOnce(I) -> Result<O, Error>) -> Result<(), Failure>
where
    I: for<'de> serde::Deserialize<'de>,
    O: serde::Serialize,
{
    let input: I = json::from_str(&read_input(&io.input)?)?;
    let output = f(input)?;
    write_lines(&io.output, &[json::to_string(&output)])?;
    Ok(())
}

fn verify_cmd(args: &VerifyArgs) -> Result<ExitCode, Failure> {
    if args.list {
        let ids: Vec<String> = verify::suite_ids().into_iter().map(String::from).collect();
        write_lines(&args.output, &ids)?;
        return Ok(ExitCode::SUCCESS);
    }
    let params = Params {
        prime: args.prime,
        precision: args.precision,
        dim_max: args.dim_max,
    };
    let reports = verify::run(&args.suite, args.seed, args.samples, params)?;
    let lines: Vec<String> = reports.iter().map(json::to_string).collect();
    write_lines(&args.output, &lines)?;
    if args.timings {
        for r in &reports {
            eprintln!(
                "{}",
                serde_json::json!({ "suite": r.suite, "elapsed_ms": r.elapsed.as_millis() as u64 })
            );
        }
    }
    Ok(if reports.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn dispatch(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Verify(args) => return verify_cmd(&args),
        Command::Adjoint(io) => transform(&io, |u: Operator| Ok(u.adjoint_omega()))?,
        Command::Norm(io) => transform(&io, |u: Operator| Ok(NormReport { norm: u.op_norm() }))?,
        Command::Gelfand { inverse: false, io } => transform(&io, |u: BElement| Ok(gelfand(&u)))?,
        Command::Gelfand { inverse: true, io } => {
            transform(&io, |t: GelfandTable| gelfand_inverse(&t))?
        }
        Command::Integrate(io) => transform(&io, |r: IntegrateRequest| r.integrate())?,
        Command::Decompose(io) => transform(&io, |b: Operator| spectral_decompose_diagonal(&b))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{}", failure.to_json());
            ExitCode::from(2)
        }
    }
}
