use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = berg_cli::execute(std::env::args());
    if !outcome.wrote_file && !outcome.output.is_empty() {
        if outcome.use_stderr {
            eprint!("{}", outcome.output);
            if !outcome.output.ends_with('\n') {
                eprintln!();
            }
        } else {
            print!("{}", outcome.output);
        }
    }
    ExitCode::from(outcome.exit_code.clamp(0, 255) as u8)
}
