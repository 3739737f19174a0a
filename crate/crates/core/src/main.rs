use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use envlab::cli::{run, Cli, EXIT_CONFIG};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, out) = run(&cli);
    if outcome.code == EXIT_CONFIG {
        eprint!("{}", outcome.text);
        return ExitCode::from(EXIT_CONFIG as u8);
    }
    let written = match out {
        Some(path) => std::fs::write(&path, &outcome.text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(outcome.text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG as u8);
    }
    ExitCode::from(outcome.code as u8)
}
