use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ordcalc::cli::{budget_from_env, execute, BUDGET_VAR};
use ordcalc::Universe;

/// Exact arithmetic on ordinals, Euclidean integers and numerosities.
#[derive(Parser, Debug)]
#[command(name = "ordcalc", version)]
struct Args {
    /// Emit one JSON object per command.
    #[arg(long)]
    json: bool,

    /// Run the commands in FILE, one per line, stopping at the first error.
    #[arg(short = 'f', value_name = "FILE", conflicts_with = "command")]
    file: Option<PathBuf>,

    /// The command, e.g. `cmp 2*P(w)-3 P(w)`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    command: Vec<String>,
}

fn run_line(line: &str, json: bool, universe: &Universe) -> Result<(), u8> {
    match execute(line, universe) {
        Ok(out) => {
            if json {
                println!("{}", out.to_json());
            } else {
                println!("{}", out.text());
            }
            Ok(())
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(e.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let universe = match budget_from_env(std::env::var(BUDGET_VAR).ok().as_deref()) {
        Ok(u) => u,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let lines: Vec<String> = match &args.file {
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with("//"))
                .map(String::from)
                .collect(),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None if args.command.is_empty() => {
            eprintln!("error: no command given");
            return ExitCode::from(2);
        }
        None => vec![args.command.join(" ")],
    };
    for line in &lines {
        if let Err(code) = run_line(line, args.json, &universe) {
            return ExitCode::from(code);
        }
    }
    ExitCode::SUCCESS
}
