use std::process::ExitCode;

use clap::Parser;
use sqsp::cli::{dispatch, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("SQSP_LOG", "warn")).init();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sqsp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
