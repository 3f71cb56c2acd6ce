use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "flatmodels",
    version,
    about = "Count finite flat models of rank-two constant group schemes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

/// A single (p, e, q) point; q is p^k, or given literally with --q.
#[derive(Debug, Args)]
pub struct Point {
    /// Odd prime p.
    #[arg(long)]
    p: u32,
    /// Absolute ramification degree e >= 1.
    #[arg(long)]
    e: u32,
    /// Residue field degree; q = p^k.
    #[arg(long, default_value_t = 1, conflicts_with = "q")]
    k: u32,
    /// Residue field size, a power of p (alternative to --k).
    #[arg(long)]
    q: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of models over GF(q).
    Count {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Counts and dimensions over a grid of (p, e, k).
    Table {
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
        /// A single e or an inclusive range `a..b`.
        #[arg(long)]
        e: String,
        /// Comma-separated residue field degrees.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        k: Vec<u32>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Zeta-function factors (n, c_n).
    Zeta {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Dimension of the moduli space.
    Dim {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        e: u32,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Per-cell invariants (s, t, case, r, h).
    Census {
        #[command(flatten)]
        point: Point,
        /// Print only the total sum of q^h.
        #[arg(long)]
        sum: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Brute-force lattice enumeration.
    Oracle {
        #[command(flatten)]
        point: Point,
        /// Run even when the enumeration exceeds the size caps.
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the cross-check suite.
    Verify {
        #[arg(long, default_value = "desk")]
        suite: String,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
}

fn dispatch(command: Command) -> Result<String, CliError> {
    match command {
        Command::Count { point, format } => commands::count(&point, format),
        Command::Table { p, e, k, format } => commands::table(&p, &e, &k, format),
        Command::Zeta { point, format } => commands::zeta(&point, format),
        Command::Dim { p, e, format } => commands::dim(p, e, format),
        Command::Census { point, sum, format } => commands::census(&point, sum, format),
        Command::Oracle {
            point,
            force,
            format,
        } => commands::oracle(&point, force, format),
        Command::Verify { suite, format } => commands::verify(&suite, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let (text, code) = match dispatch(cli.command) {
        Ok(text) => (text, 0),
        Err(CliError::Failed(text)) => (text, 2),
        Err(CliError::Inconsistent(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };

    let written = match &cli.output {
        Some(path) => fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(err) = written {
        eprintln!("error: cannot write output: {err}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
