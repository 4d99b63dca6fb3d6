use std::process::ExitCode;

use clap::Parser;
use invasion_qsd::cli::{emit, execute, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|cfg| {
        let output = execute(&cfg)?;
        emit(&cfg, &output)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("invasion-qsd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
