use std::process::ExitCode;

use clap::Parser;
use hesse_lab::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match hesse_lab::run(&cli) {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome.document).expect("serializable"));
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
