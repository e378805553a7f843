use std::process::ExitCode;

fn main() -> ExitCode {
    rgmis::cli::main_with_args(std::env::args_os())
}
