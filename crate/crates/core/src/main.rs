use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    if let Some(n) = std::env::var("QB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Only the degree of parallelism changes; output bytes do not.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let outcome = qbrackets::cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
