use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod problem;
mod report;
mod verify;

use problem::{Mode, Overrides, ProblemFile};
use report::Report;
use verify::{Suite, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent input (exit 2).
    Input(String),
    /// A library error raised while solving (exit 1).
    Solver(padic_cauchy::Error),
    Io(String),
}

impl From<padic_cauchy::Error> for CliError {
    fn from(e: padic_cauchy::Error) -> Self {
        CliError::Solver(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Solver(e) => write!(f, "solver error: {e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "padic-cauchy",
    version,
    about = "Series solutions of y' = Ay and Cauchy-Kovalevskaya problems over Q_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Prime p (overrides the file).
    #[arg(long = "p", global = true)]
    prime: Option<u64>,
    /// Relative precision N in p-adic digits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Series depth K.
    #[arg(long, global = true)]
    terms: Option<usize>,
    /// Shrink factor for the well-posedness disk, a rational in (0, 1).
    #[arg(long, global = true)]
    epsilon: Option<String>,
    /// Window for the type estimate.
    #[arg(long, global = true)]
    window: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Norm sequence and type estimate of y0 under a matrix.
    Analyze {
        #[arg(long)]
        file: PathBuf,
    },
    /// Solve y' = Ay, y(0) = y0 for a matrix A.
    SolveOde {
        #[arg(long)]
        file: PathBuf,
    },
    /// Solve du/dt = sum a_beta D^beta u, u(0) = phi on A_rho.
    SolvePde {
        #[arg(long)]
        file: PathBuf,
    },
    /// Run a built-in verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 2000)]
        max_n: u64,
        #[arg(long, default_value_t = 25)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let c = &cli.common;
    let ov = Overrides {
        prime: c.prime,
        precision: c.precision,
        depth: c.terms,
        epsilon: c.epsilon.clone(),
        window: c.window,
    };
    let load = |file: &PathBuf, mode| ProblemFile::load(file)?.resolve(mode, &ov);
    match &cli.command {
        Command::Analyze { file } => commands::analyze(&load(file, Mode::Analyze)?),
        Command::SolveOde { file } => commands::solve_ode(&load(file, Mode::Ode)?),
        Command::SolvePde { file } => commands::solve_pde(&load(file, Mode::Pde)?),
        Command::Verify {
            suite,
            max_n,
            cases,
            seed,
        } => verify::run(&VerifyArgs {
            suite: *suite,
            max_n: *max_n,
            cases: *cases,
            seed: *seed,
            prime: c.prime,
            precision: c.precision.unwrap_or(problem::DEFAULT_PRECISION),
            depth: c.terms,
        }),
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    let text = match cli.common.format {
        Format::Text => report.to_text(),
        Format::Machine => report.to_machine(),
    };
    match &cli.common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("padic-cauchy: {e}");
            return match e {
                CliError::Input(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            };
        }
    };
    if let Err(e) = emit(&cli, &report) {
        eprintln!("padic-cauchy: {e}");
        return ExitCode::from(1);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
