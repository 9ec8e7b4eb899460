use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = leavitt::cli::run(std::env::args_os());
    if code == leavitt::cli::EXIT_INPUT {
        eprint!("{out}");
    } else {
        let _ = std::io::stdout().write_all(out.as_bytes());
    }
    ExitCode::from(code as u8)
}
