use std::process::ExitCode;

fn main() -> ExitCode {
    choicekit::cli::main()
}
