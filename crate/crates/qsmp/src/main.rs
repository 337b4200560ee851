use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qsmp::cli::main_entry().clamp(0, 255) as u8)
}
