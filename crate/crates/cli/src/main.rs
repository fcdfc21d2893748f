mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use opspace_core::exec::with_threads;

use crate::args::{Cli, Command};
use crate::commands::{Failure, Outcome};

const EXIT_VALIDATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::Monotones(a) => commands::monotones(a, c),
        Command::ExactPurity(a) => commands::exact(a, c),
        Command::McPurity(a) => commands::mc(a, c),
        Command::VerifyHierarchy(a) => commands::hierarchy(a, c),
        Command::Weingarten(a) => commands::weingarten(a, c),
        Command::Selftest => commands::selftest(c),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let outcome = match cli.common.threads {
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(k) => with_threads(k, || dispatch(&cli)).unwrap_or_else(|e| Err(e.into())),
        None => dispatch(&cli),
    };

    match outcome {
        Ok(o) => {
            if let Err(e) = output::emit(&o.text, cli.common.out.as_deref()) {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            if o.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("{}: checks failed", cli.command.name());
                ExitCode::from(EXIT_VALIDATION)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
