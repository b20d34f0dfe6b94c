use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hyperq::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Some(note) = &outcome.note {
        eprintln!("{note}");
    }
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.body)
            .map_err(|e| format!("writing {}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(outcome.body.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(outcome.code)
}
