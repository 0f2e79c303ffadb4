//! `pprloc` command-line driver.

mod args;
mod commands;
mod manifest;
mod parallel;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::commands::UsageError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let is_usage = e.downcast_ref::<UsageError>().is_some()
                || matches!(
                    e.downcast_ref::<pprloc::Error>(),
                    Some(pprloc::Error::InvalidParameter(_))
                );
            ExitCode::from(if is_usage { 1 } else { 2 })
        }
    }
}
