use clap::Parser;
use mzsim_cli::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(err) = mzsim_cli::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
