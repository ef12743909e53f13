use std::io::Write;
use std::panic;
use std::process::ExitCode;

use hyperwalk_cli::{run, CliError, ErrorKind};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let outcome = panic::catch_unwind(|| run(&argv)).unwrap_or_else(|payload| {
        let message = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        let e = CliError::new(ErrorKind::Internal, message);
        hyperwalk_cli::Outcome {
            exit_code: e.kind.exit_code(),
            stdout: format!("{}\n", e.to_json()),
        }
    });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.stdout.as_bytes());
    let _ = out.flush();
    ExitCode::from(outcome.exit_code as u8)
}
