mod commands;
mod config;
mod exit;
mod report;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, RunConfig};

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is the solver code here
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let run = RunConfig::resolve(cli.command, &cli.flags).and_then(|cfg| match cli.command {
        Command::Distance => commands::distance(&cfg),
        Command::Geodesic => commands::geodesic(&cfg),
        Command::GromovScan => commands::gromov_scan(&cfg),
        Command::Verify => commands::verify(&cfg),
    });
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tubegeo: {}", f);
            f.code()
        }
    }
}
