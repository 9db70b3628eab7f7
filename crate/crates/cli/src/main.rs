use std::process::ExitCode;

use clap::{Parser, Subcommand};
use leastgrad::commands;
use leastgrad::config::{Command, Flags};

/// Fat Cantor traces, their barrier sets and a least-gradient solver.
#[derive(Debug, Parser)]
#[command(name = "leastgrad", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Write the arcs and barrier components of depth n as JSON.
    Construct(Flags),
    /// Draw the barrier of depth n as SVG.
    Render(Flags),
    /// Run check suites and write a JSON report.
    Verify(Flags),
    /// Solve with the trace of C_n; write a CSV row and the field.
    Solve(Flags),
    /// Solve for every depth up to n; write the CSV table and the fields.
    Experiment(Flags),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match cli.command {
        Sub::Construct(f) => (Command::Construct, f),
        Sub::Render(f) => (Command::Render, f),
        Sub::Verify(f) => (Command::Verify, f),
        Sub::Solve(f) => (Command::Solve, f),
        Sub::Experiment(f) => (Command::Experiment, f),
    };
    match commands::run(command, &flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("leastgrad: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
