use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use homcover_cli::{run_command, Command};

fn main() -> ExitCode {
    let cmd = Command::parse();
    match run_command(&cmd) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.report.render(cmd.format).as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
