use std::process::ExitCode;

use clap::Parser;
use loadshare::args::Cli;
use loadshare::commands;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("loadshare: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
