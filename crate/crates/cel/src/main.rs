use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(cel::cli::run())
}
