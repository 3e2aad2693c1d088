mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use algdyn::Execution;
use clap::Parser;

use args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    match commands::run(&cli.command, exec) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            for r in &outcome.records {
                writeln!(out, "{}", r.render(cli.output)).expect("write to stdout");
            }
            if outcome.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
