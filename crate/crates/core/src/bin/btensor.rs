use std::io::Write;
use std::process::ExitCode;

use btensor::cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let out = run(&Cli::parse());
    for line in &out.stderr {
        eprintln!("{line}");
    }
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(out.code as u8)
}
