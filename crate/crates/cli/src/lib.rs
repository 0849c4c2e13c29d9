//! Library half of the `mzsim` binary: argument definitions, file formats,
//! rendering, and the command handlers, kept out of `main` so integration
//! tests can drive them directly.

pub mod commands;
pub mod csvio;
pub mod manifest;
pub mod svg;

use clap::{Parser, Subcommand};

pub use commands::{
    cmd_decrypt, cmd_entropy, cmd_plot, cmd_simulate, CliError, DecryptArgs, EntropyArgs,
    PlotArgs, SimulateArgs,
};

#[derive(Parser, Debug)]
#[command(
    name = "mzsim",
    version,
    about = "Two-path interferometer simulator: coin-randomized trials, XOR decryption, \
             entropy tables, fringe plots"
)]
pub struct Cli {
    /// Worker threads for parallel sections; 0 keeps the default. Results
    /// are identical for any value.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run an experiment plan and write records, counts, and a manifest.
    Simulate(SimulateArgs),
    /// Split coin-randomized records by the coin history and re-aggregate.
    Decrypt(DecryptArgs),
    /// Tabulate mixture eigenvalues and von Neumann entropy.
    Entropy(EntropyArgs),
    /// Render a counts table as an SVG fringe plot.
    Plot(PlotArgs),
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot use {} threads: {e}", cli.threads)))?;
    }
    match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Decrypt(args) => cmd_decrypt(args),
        Command::Entropy(args) => cmd_entropy(args),
        Command::Plot(args) => cmd_plot(args),
    }
}
