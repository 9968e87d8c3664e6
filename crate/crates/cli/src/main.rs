//! `latspec` command-line interface.
//!
//! Exit codes: 0 success; 1 `verify` found a gap above tolerance;
//! 2 malformed flags (usage text from clap); 3 domain or runtime error,
//! reported as `{"error": {"kind": …, "message": …}}` on stderr.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify(a) => commands::classify(a),
        Command::Solve(a) => commands::solve(a),
        Command::Eigvec(a) => commands::eigvec(a),
        Command::Verify(a) => commands::verify(a),
        Command::Evolve(a) => commands::evolve(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match result {
        Ok(status) => status,
        Err(e) => {
            let obj = serde_json::json!({
                "error": { "kind": e.kind(), "message": e.to_string() }
            });
            eprintln!("{obj}");
            ExitCode::from(3)
        }
    }
}
