//! Binary entry point: parse arguments, dispatch, exit with the CLI's
//! stable exit-code contract (0 pass, 1 property violation, 2 usage/input
//! error).

use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(truthpoint::cli::run())
}
