mod commands;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{Outcome, Status};
use crate::grid::Grid;
use crate::output::Format;

/// Mellin transforms, classification and simulation of perpetuities of
/// subordinators.
#[derive(Debug, Parser)]
#[command(name = "perpetua", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Evaluation points: start:stop:count[:log] or a comma-separated list.
    #[arg(long, global = true)]
    grid: Option<Grid>,

    /// Relative tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Number of Monte Carlo samples.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Time step of the Riemann sum.
    #[arg(long, global = true)]
    dl: Option<f64>,

    /// Truncation horizon of the Riemann sum.
    #[arg(long = "L", global = true)]
    horizon: Option<f64>,

    /// Seed of the random streams.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Shorthand for --format json.
    #[arg(long, global = true)]
    json: bool,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Keep entries whose id contains this text; `sigma` keeps the
    /// self-conjugate class, `complete` the complete Bernstein functions.
    #[arg(long, global = true)]
    filter: Option<String>,

    /// Run on every catalog entry.
    #[arg(long, global = true)]
    all: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the catalog entries with their closed forms.
    Catalog,
    /// Tabulate E[R^(r-1)] and E[I^(r-1)] by both routes.
    Mellin { entry: String },
    /// Infinite-divisibility and self-decomposability checks.
    Classify { entry: Option<String> },
    /// Monte Carlo estimates of E[I^(r-1)].
    Simulate {
        entry: String,
        /// Repeat with dl halved this many times.
        #[arg(long, default_value_t = 0)]
        refine: usize,
        /// Compare moments of I·R with those of a standard exponential.
        #[arg(long)]
        factorization: bool,
    },
    /// Run the invariant suite.
    Verify { entry: Option<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("PERPETUA_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // the global pool can only be configured once; a second attempt is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let c = &cli.common;
    let format = if c.json { Format::Json } else { c.format };
    let outcome = match &cli.command {
        Command::Catalog => commands::catalog(c.filter.as_deref()),
        Command::Mellin { entry } => commands::mellin(entry, c.grid.as_ref(), c.tol),
        Command::Classify { entry } => commands::classify(entry.as_deref(), c.all, c.filter.as_deref()),
        Command::Simulate { entry, refine, factorization } => commands::simulate(
            entry,
            c.grid.as_ref(),
            &commands::McFlags { n: c.n, dl: c.dl, horizon: c.horizon, seed: c.seed },
            *refine,
            *factorization,
        ),
        Command::Verify { entry } => commands::verify(
            entry.as_deref(),
            c.all,
            c.filter.as_deref(),
            c.grid.as_ref(),
            c.tol,
            &commands::McFlags { n: c.n, dl: c.dl, horizon: c.horizon, seed: c.seed },
        ),
    };
    match outcome {
        Ok(Outcome { rows, status }) => {
            if let Err(e) = output::emit(&rows, format, c.out.as_deref()) {
                eprintln!("perpetua: cannot write output: {e}");
                return ExitCode::from(1);
            }
            match status {
                Status::Ok => ExitCode::SUCCESS,
                Status::CheckFailed => ExitCode::from(1),
                Status::NonConvergence => ExitCode::from(3),
            }
        }
        Err(e) => {
            eprintln!("perpetua: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
