use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(kiepert::cli::run(std::env::args_os()))
}
