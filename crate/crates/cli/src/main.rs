//! Command-line front end: sequence generation, gambler export, simulation,
//! analysis and verification.

mod analyze;
mod common;
mod gambler;
mod gen;
mod report;
mod run;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use common::{CliError, Status};

#[derive(Debug, Parser)]
#[command(
    name = "mhgale",
    version,
    about = "Multi-head finite-state gamblers on self-referential sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a prefix of a generated sequence.
    Gen(gen::GenArgs),
    /// Export built-in gamblers.
    #[command(subcommand)]
    Gambler(gambler::GamblerCommand),
    /// Run a gambler over a sequence and write the checkpoint table.
    Run(Box<run::RunArgs>),
    #[command(subcommand)]
    Analyze(analyze::AnalyzeCommand),
    #[command(subcommand)]
    Verify(verify::VerifyCommand),
    /// Tracker against both baselines at every boundary.
    Report(report::ReportArgs),
}

fn dispatch(command: Command) -> Result<Status, CliError> {
    match command {
        Command::Gen(a) => gen::run(&a),
        Command::Gambler(c) => gambler::dispatch(c),
        Command::Run(a) => run::execute(&a),
        Command::Analyze(c) => analyze::dispatch(c),
        Command::Verify(c) => verify::dispatch(c),
        Command::Report(a) => report::execute(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
