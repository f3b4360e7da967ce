use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let exit = heds_cli::run_args(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(exit.code())
}
