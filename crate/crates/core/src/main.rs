use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = wsne_forge::cli::run(std::env::args_os().skip(1), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}
