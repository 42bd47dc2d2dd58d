use std::process::ExitCode;

fn main() -> ExitCode {
    semidyn_core::cli::run(std::env::args_os())
}
