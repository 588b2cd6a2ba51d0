use std::process::ExitCode;

fn main() -> ExitCode {
    // Internal assertion failures surface as panics; report them as exit 2
    // to distinguish them from user errors (exit 1).
    let outcome = std::panic::catch_unwind(|| tbqec::cli::dispatch(std::env::args_os()));
    match outcome {
        Ok(code) => ExitCode::from(code.clamp(0, 255) as u8),
        Err(_) => ExitCode::from(2),
    }
}
