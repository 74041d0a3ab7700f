//! `stonean-lab`: batch front end for stonean-core.
//!
//! Exit codes: 0 on success, 1 when the checked property fails or a system is
//! infeasible, 2 on usage and input errors.

mod commands;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match commands::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = String::new();
    let code = match commands::run(cli, &mut out) {
        Ok(outcome) => {
            print!("{out}");
            outcome.code()
        }
        Err(e) => {
            print!("{out}");
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    ExitCode::from(code)
}
