use std::process::ExitCode;

use clap::Parser;
use diphthong_dynamics::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli.command) {
        Ok(report) => {
            for f in &report.files {
                println!("{}", f.display());
            }
            if report.warnings > 0 {
                eprintln!("warning: {} input(s) skipped, see skipped.csv", report.warnings);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
