mod args;
mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use commands::Failure;

/// Applies `--config` and parses the command line. `Ok(None)` means help
/// or version text was printed.
fn parse(raw: Vec<OsString>) -> Result<Option<Cli>, Failure> {
    let argv = match config::config_path(&raw) {
        Some(path) => {
            let (global, local) = config::load(&PathBuf::from(path)).map_err(Failure::Domain)?;
            config::merge(raw, global, local)
        }
        None => raw,
    };
    match Cli::try_parse_from(argv) {
        Ok(cli) => Ok(Some(cli)),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            Ok(None)
        }
        Err(e) => Err(Failure::Usage(e.render().to_string())),
    }
}

fn main() -> ExitCode {
    eprintln!("plap {}", env!("CARGO_PKG_VERSION"));
    let cli = match parse(std::env::args_os().collect()) {
        Ok(Some(cli)) => cli,
        Ok(None) => return ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message().trim_end());
            return ExitCode::from(f.exit_code());
        }
    };
    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.exit_code());
        }
    };
    for note in &outcome.notes {
        eprintln!("error: {note}");
    }
    let text = outcome.document.render(cli.output);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.exit_code)
}
