//! Command-line front end over the vortexel library: exceptional-line
//! phase diagrams, Berry phases of loop documents, filament catalogs,
//! finite-chain spectra, and a seeded self-verification suite.

use std::fmt;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod loopspec;

pub use loopspec::{Geometry, LoopSpec, Space};

/// Failures split by exit status: bad input is 1, a failed verification
/// property is 2.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Failed(String),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Failed(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "error: {m}"),
            CliError::Failed(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<vortexel::Error> for CliError {
    fn from(e: vortexel::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Delimiter-separated values with a header row.
    Table,
    /// JSON with a schema_version field.
    Doc,
}

pub(crate) fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    use std::io::Write as _;
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display()))),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Ok(()) => Ok(()),
            // A downstream pipe closing early (e.g. `| head`) is not a fault.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            Err(e) => Err(CliError::invalid(format!("cannot write to stdout: {e}"))),
        },
    }
}

#[derive(Parser)]
#[command(
    name = "vortexel",
    version,
    about = "Berry phases and exceptional-line diagnostics for small non-Hermitian models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the lambda = 0 exceptional-line diagram of the chain.
    PhaseDiagram {
        /// Number of unit cells (even).
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Nominal hopping J0.
        #[arg(long, default_value_t = 1.0)]
        j0: f64,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Integrate the ground-state Berry phase around a loop document.
    BerryPhase {
        /// Bundled loop name (fig4a..fig4f) or a path to a loop JSON file.
        #[arg(long = "loop", value_name = "NAME|FILE")]
        loop_spec: String,
        /// Override the sample count stored in the loop document.
        #[arg(long)]
        samples: Option<usize>,
        /// Number of unit cells for rm-space loops (even).
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Nominal hopping J0 for rm-space loops.
        #[arg(long, default_value_t = 1.0)]
        j0: f64,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// List the oriented vortex filaments of both parameter spaces.
    Filaments {
        /// Nominal hopping J0 (places the Delta = +-J0 filaments).
        #[arg(long, default_value_t = 1.0)]
        j0: f64,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Per-mode eigenvalues and the many-body ground energy of the chain.
    Eig {
        /// Number of unit cells (even).
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Nominal hopping J0.
        #[arg(long, default_value_t = 1.0)]
        j0: f64,
        /// Hopping stagger delta.
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Real on-site stagger lambda.
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        /// Imaginary on-site stagger Delta.
        #[arg(long, default_value_t = 0.0)]
        big_delta: f64,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run the seeded verification suites and report residuals.
    Verify {
        /// Randomness seed; identical seeds give byte-identical reports.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Replace every suite threshold (for failure-path testing).
        #[arg(long)]
        threshold: Option<f64>,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

/// Parse arguments and run one command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::PhaseDiagram { n, j0, out, format } => {
            commands::phase_diagram(n, j0, out.as_ref(), format)
        }
        Command::BerryPhase {
            loop_spec,
            samples,
            n,
            j0,
            out,
            format,
        } => commands::berry_phase(&loop_spec, samples, n, j0, out.as_ref(), format),
        Command::Filaments { j0, out, format } => commands::filaments(j0, out.as_ref(), format),
        Command::Eig {
            n,
            j0,
            delta,
            lambda,
            big_delta,
            out,
            format,
        } => commands::eig(n, j0, delta, lambda, big_delta, out.as_ref(), format),
        Command::Verify {
            seed,
            threshold,
            out,
            format,
        } => commands::verify(seed, threshold, out.as_ref(), format),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
