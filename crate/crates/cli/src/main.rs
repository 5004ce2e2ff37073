use std::io::{self, Write};
use std::process::ExitCode;

use chernoff_cli::{run, Cli, Exit};
use clap::error::ErrorKind;
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => ExitCode::SUCCESS,
                _ => ExitCode::from(Exit::Usage as u8),
            };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let status = match run(cli, &mut out) {
        Ok(status) => status,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit()
        }
    };
    let _ = out.flush();
    if status == Exit::Infeasible {
        eprintln!("note: at least one lower bound is infeasible at this level");
    }
    ExitCode::from(status as u8)
}
