//! `crnpp`: compile, simulate, interpret and error-check CRN++ programs.
//!
//! Exit codes: 0 on success, 1 for user or program errors (bad arguments,
//! diagnostics, I/O), 2 for numerical failures (solver breakdown, error
//! threshold exceeded).

mod commands;
mod input;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "crnpp", version, about = "Compiler and mass-action simulator for CRN++ programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a program to a reaction network (`<name>.crn.json`).
    Compile {
        #[command(flatten)]
        program: ProgramArgs,
        /// Print species and reaction counts, next to the reference sizes
        /// for bundled programs.
        #[arg(long)]
        stats: bool,
    },
    /// Simulate a program (or a compiled `.json` network) and write its trace.
    Simulate {
        #[command(flatten)]
        program: ProgramArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Simulated time for a compiled `.json` network, which carries no
        /// clock schedule; ignored for source programs.
        #[arg(long, default_value_t = 100.0)]
        time: f64,
        /// Comma-separated species to plot into `<name>.svg`.
        #[arg(long, value_delimiter = ',')]
        plot: Vec<String>,
        /// Keep every n-th trace row in the CSV (first and last always kept).
        #[arg(long, default_value_t = 1)]
        every: usize,
    },
    /// Run the exact reference interpreter and write its phase timeline.
    Interpret {
        #[command(flatten)]
        program: ProgramArgs,
        #[arg(long, default_value_t = 6)]
        cycles: usize,
    },
    /// Compare simulation against the reference interpreter.
    CheckError {
        #[command(flatten)]
        program: ProgramArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Species to track (comma-separated); defaults to the bundled
        /// program's tracked species.
        #[arg(long, value_delimiter = ',')]
        track: Vec<String>,
        /// Exit with status 2 if any tracked error exceeds this bound.
        #[arg(long)]
        max_error: Option<f64>,
    },
    /// Error surface of one arithmetic module over an operand grid.
    Sweep {
        #[arg(value_enum)]
        module: SweepModule,
        #[arg(long, default_value_t = 0.5)]
        min: f64,
        #[arg(long, default_value_t = 10.0)]
        max: f64,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        /// Simulated time per grid cell.
        #[arg(long, default_value_t = 10.0)]
        duration: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(short = 'o', long = "out", default_value = "out")]
        out: PathBuf,
    },
    /// List the bundled programs or copy them to a directory.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Name, parameters and tracked species of each bundled program.
    List,
    /// Write every bundled program to `<dir>/<name>.crnpp`.
    Export { dir: PathBuf },
}

#[derive(Args)]
struct ProgramArgs {
    /// Path to a `.crnpp` file, or the name of a bundled program.
    input: String,
    /// Parameter binding `name=value`; repeatable.
    #[arg(short = 'p', long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Comparison offset: `cmp[x,y]` reports GT only when x > y + epsilon.
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(short = 'o', long = "out", default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = Clock::Ideal)]
    clock: Clock,
    #[arg(long, default_value_t = 6)]
    cycles: usize,
    /// Length of one phase under the ideal clock.
    #[arg(long, default_value_t = crnpp_core::ClockBackend::DEFAULT_PHASE_DURATION)]
    phase_duration: f64,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = crnpp_core::SolverConfig::default().rel_tol)]
    rel_tol: f64,
    #[arg(long, default_value_t = crnpp_core::SolverConfig::default().abs_tol)]
    abs_tol: f64,
    #[arg(long)]
    max_step: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Clock {
    Ideal,
    Oscillator,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepModule {
    Add,
    Sub,
    Mul,
    Div,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
