use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use invpress::{run, RunOptions};

/// Invariance pressure and BS dimension computations driven by a JSON config.
#[derive(Parser, Debug)]
#[command(name = "invpress", version)]
struct Args {
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Directory receiving the CSV outputs and manifest.json.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads for grid evaluations (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Lift the word and tree-node enumeration guards.
    #[arg(long)]
    force_guards: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = RunOptions {
        config: args.config,
        out: args.out,
        threads: args.threads,
        force_guards: args.force_guards,
    };
    match run(&opts) {
        Ok(report) => {
            for f in &report.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
