use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(lresonance_cli::run(std::env::args_os()))
}
