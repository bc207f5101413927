use std::process::ExitCode;

use clap::Parser;

use geomcode::cli::{run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).unwrap_or_else(|e| Outcome::fail(cli.command.name(), e.to_string()));
    println!("{}", serde_json::to_string(&outcome).expect("outcome serializes"));
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        for f in &outcome.failures {
            eprintln!("error: {}", f);
        }
        ExitCode::FAILURE
    }
}
