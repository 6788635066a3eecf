use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use upsilon_cli::commands::{self, PlotFormat};
use upsilon_cli::{CliError, Options, Outcome};

/// Exact Upsilon and secondary Upsilon invariants of torus knot sums.
#[derive(Parser)]
#[command(name = "upsilon", version)]
struct Cli {
    /// Cache invariant reports in this directory.
    #[arg(long, global = true, env = "UPSILON_CACHE_DIR")]
    cache: Option<PathBuf>,
    /// Omit the timing field for byte-reproducible output.
    #[arg(long, global = true)]
    no_timing: bool,
    /// JSON output for commands that default to text.
    #[arg(long, global = true)]
    json: bool,
    /// Also check Upsilon at this many equally spaced extra points.
    #[arg(long, global = true, default_value_t = 0)]
    grid: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Upsilon and Upsilon2 at every singularity, as JSON.
    Invariants {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Check Upsilon(T(p,q)) = Upsilon(T(p,q-p)) + Upsilon(T(p,p+1)).
    VerifyFk { p: u64, q: u64 },
    /// Try to tell two expressions apart with Upsilon and Upsilon2.
    Distinguish {
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
    /// Compare T(p,p+k) with T(k,p) # T(p,p+1).
    Conjecture { p: u64, k: u64 },
    /// Write Upsilon as CSV breakpoints or an SVG curve.
    Plot {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = PlotFormat::Csv)]
        format: PlotFormat,
    },
    /// Step vector and staircase complex of T(p,q), as JSON.
    Staircase { p: u64, q: u64 },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let opts = Options {
        cache: cli.cache,
        no_timing: cli.no_timing,
        json: cli.json,
        grid: cli.grid,
    };
    match cli.command {
        Command::Invariants { expr } => commands::cmd_invariants(&expr, &opts),
        Command::VerifyFk { p, q } => commands::cmd_verify_fk(p, q, &opts),
        Command::Distinguish { first, second } => commands::cmd_distinguish(&first, &second, &opts),
        Command::Conjecture { p, k } => commands::cmd_conjecture(p, k, &opts),
        Command::Plot { expr, out, format } => commands::cmd_plot(&expr, &out, format, &opts),
        Command::Staircase { p, q } => commands::cmd_staircase(p, q),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
