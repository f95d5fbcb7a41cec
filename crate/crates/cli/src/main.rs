mod args;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::Parser;
use serde_json::json;

use args::Cli;
use commands::{dispatch, Context};
use config::FileConfig;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Runs the command and writes its report. Returns whether every check passed.
fn execute(cli: &Cli) -> Result<bool> {
    let file = FileConfig::load(cli.global.config.as_deref())?;
    if let Some(jobs) = cli.global.jobs.or(file.jobs) {
        if jobs == 0 {
            anyhow::bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let ctx = Context {
        seed: cli.global.seed.or(file.seed).unwrap_or(0),
        verbose: cli.global.verbose,
        file,
    };
    let name = cli.command.name();
    let outcome = dispatch(&cli.command, &ctx)?;
    let passed = outcome.report.passed();
    let doc = json!({
        "command": name,
        "passed": passed,
        "report": outcome.report,
        "data": outcome.data,
    });
    let path = cli
        .global
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("qpq-{name}.json")));
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;

    print!("{}", outcome.summary);
    println!("report: {}", path.display());
    for f in &outcome.files {
        println!("wrote: {}", f.display());
    }
    if !passed {
        eprintln!("{name}: acceptance checks failed");
    }
    Ok(passed)
}
