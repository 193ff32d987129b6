mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use mixedcol::ColumnError;

use args::{Cli, Command};

/// Negative eddy diffusivity: the closure rejected the column.
const EXIT_MODEL_INVALID: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Run { case, model } => commands::run(case, *model),
        Command::Coeffs {
            r_min,
            r_max,
            samples,
            out,
        } => commands::coeffs(*r_min, *r_max, *samples, &out.out),
        Command::Equilibrium {
            case,
            model,
            kh_r_max,
            samples,
        } => commands::equilibrium(case, *model, *kh_r_max, *samples),
        Command::Diagnose { case } => commands::diagnose(case),
        Command::Compare { case, models } => commands::compare(case, models),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let invalid = e.chain().any(|c| {
                c.downcast_ref::<ColumnError>()
                    .is_some_and(ColumnError::is_model_invalid)
            });
            if invalid {
                ExitCode::from(EXIT_MODEL_INVALID)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
