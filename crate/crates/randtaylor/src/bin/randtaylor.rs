use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(randtaylor::cli::run(std::env::args()) as u8)
}
