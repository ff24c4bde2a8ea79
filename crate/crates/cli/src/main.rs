use std::process::ExitCode;

use clap::Parser;
use dgff_cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(w) = std::env::var("DGFF_WORKERS") {
        match w.parse::<usize>() {
            Ok(n) if n > 0 => {
                // Only fails if a global pool already exists.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: DGFF_WORKERS must be a positive integer, got '{w}'");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
