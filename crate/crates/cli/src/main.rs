//! `frac`: command-line front end for the fracseries engine.
//!
//! Exit codes: 0 on success, 1 on usage, domain or parameter errors, 2 when
//! a `verify` suite ran but a check exceeded its tolerance.

mod args;
mod commands;
mod output;
mod verify;

use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

fn run(cli: &Cli) -> anyhow::Result<bool> {
    for path in commands::inputs(&cli.command) {
        if !path.is_file() {
            bail!("input file {} does not exist", path.display());
        }
    }
    if let Some(out) = &cli.out {
        let parent = out.parent().filter(|p| !p.as_os_str().is_empty());
        if parent.is_some_and(|p| !p.is_dir()) {
            bail!("output directory for {} does not exist", out.display());
        }
    }

    let result = commands::run(&cli.command)?;
    let params = serde_json::to_value(&cli.command)?;
    let meta = output::meta(commands::name(&cli.command), params);
    let text = result.render(cli.format, &meta);
    match &cli.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(!result.failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("frac: verification failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("frac: {e:#}");
            ExitCode::from(1)
        }
    }
}
