mod commands;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A check ran and came back negative.
    #[error("{0}")]
    Failed(String),
    /// Bad arguments or unreadable input.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] hyperdirac::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use hyperdirac::Error as E;
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Lib(e) => match e {
                E::NotFound { .. }
                | E::TargetInfeasible { .. }
                | E::PlacementFailed { .. }
                | E::TemplateMatchingFailed(_)
                | E::Stage { .. } => 1,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Seed for every randomised step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Main output file of the command.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Format of the summary printed on standard output.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Worker threads (all cores when omitted).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Search node budget.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
}

#[derive(Debug, Parser)]
#[command(
    name = "hyperdirac",
    version,
    about = "Perfect matchings in dense k-graphs"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated k-graph as .khg.
    Gen {
        #[command(subcommand)]
        kind: commands::GenKind,
    },
    /// Search for a perfect matching and write it as text.
    Pm {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Exact Dirac threshold by exhaustive sweep; appends a row to a CSV table.
    Mdk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Find, verify or contract absorbers.
    Absorber {
        #[command(subcommand)]
        action: commands::AbsorberAction,
    },
    /// Build or verify resilient templates.
    Template {
        #[command(subcommand)]
        action: commands::TemplateAction,
    },
    /// Run the absorbing perfect-matching constructor.
    Pipeline {
        #[command(subcommand)]
        action: commands::PipelineAction,
    },
    /// Run a configured experiment and write its CSV files.
    Experiment {
        kind: commands::ExperimentChoice,
        #[arg(long)]
        config: PathBuf,
    },
    /// Check a matching, absorber file or template.
    Verify(commands::VerifyArgs),
}

fn run(cli: Cli) -> CliResult {
    let g = &cli.global;
    if let Some(t) = g.threads {
        set_threads(t)?;
    }
    match cli.command {
        Command::Gen { kind } => commands::gen(g, kind),
        Command::Pm { input } => commands::pm(g, &input),
        Command::Mdk {
            n,
            k,
            d,
            emit_witness,
        } => commands::mdk(g, n, k, d, emit_witness.as_deref()),
        Command::Absorber { action } => commands::absorber(g, action),
        Command::Template { action } => commands::template(g, action),
        Command::Pipeline { action } => commands::pipeline(g, action),
        Command::Experiment { kind, config } => commands::experiment(g, kind, &config),
        Command::Verify(args) => commands::verify(g, &args),
    }
}

#[cfg(feature = "parallel")]
fn set_threads(t: usize) -> CliResult {
    rayon::ThreadPoolBuilder::new()
        .num_threads(t)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))
}

#[cfg(not(feature = "parallel"))]
fn set_threads(_: usize) -> CliResult {
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
