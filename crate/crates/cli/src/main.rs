use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = starforge_cli::run(std::env::args_os());
    let line = format!("{}\n", result.render());
    // a closed pipe (e.g. `| head`) is not an error of the command
    let _ = if result.is_error() { std::io::stderr().write_all(line.as_bytes()) } else { std::io::stdout().write_all(line.as_bytes()) };
    ExitCode::from(result.exit_code as u8)
}
