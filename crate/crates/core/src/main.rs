use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fabcr::cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fabcr: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
