use std::process::ExitCode;

use bosent_cli::{check_violations, emit, run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = run(&cli).and_then(|report| {
        emit(&report, cli.format, cli.out.as_deref())?;
        check_violations(&report)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bosent: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
