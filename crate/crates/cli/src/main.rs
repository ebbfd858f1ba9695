use std::fs;
use std::process::ExitCode;

use clap::Parser;

use hopfchain_cli::{out_path, run, Cli, CliError};

fn fail(err: &CliError) -> ExitCode {
    eprintln!("{}", err.to_json());
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.to_string().trim_end().to_string())),
    };
    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    match out_path(&cli) {
        Some(path) => {
            if let Err(e) = fs::write(path, &output.text) {
                return fail(&CliError::Io(format!("cannot write {}: {e}", path.display())));
            }
        }
        None => print!("{}", output.text),
    }
    if output.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
