use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qamlab::gallery::{self, GALLERY};
use qamlab::{parse_scenario, run_scenario, write_outputs, CliError, Scenario};

#[derive(Parser)]
#[command(name = "qamlab", version, about = "Orbits of quasi-arithmetic means: density and inclusion checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its reports.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// List the shipped scenarios, print one, or run them all.
    Gallery {
        #[arg(long, conflicts_with = "print")]
        run: bool,
        #[arg(long, value_name = "NAME")]
        print: Option<String>,
        #[arg(long, default_value = "gallery-out")]
        out_dir: PathBuf,
    },
    /// Validate a scenario file without running it.
    Check { scenario: PathBuf },
}

fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_scenario(&text)
}

/// Runs and writes; returns the run's exit code.
fn execute(s: &Scenario, out_dir: &Path) -> Result<i32, CliError> {
    let run = run_scenario(s);
    for path in write_outputs(s, &run, out_dir)? {
        println!("wrote {}", path.display());
    }
    if let Some(e) = &run.error {
        eprintln!("error [{}]: {e}", e.class_name());
    }
    Ok(run.exit_code())
}

fn main_inner(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run { scenario, seed, iterations, out_dir } => {
            let mut s = load(&scenario)?;
            if let Some(seed) = seed {
                s.run.seed = seed;
            }
            if let Some(n) = iterations {
                s.run.iterations = n;
            }
            execute(&s, &out_dir)
        }
        Command::Gallery { run: false, print: None, .. } => {
            for e in GALLERY {
                let s = parse_scenario(e.text)?;
                println!("{:<28} {}", e.name, s.description.as_deref().unwrap_or(""));
            }
            Ok(0)
        }
        Command::Gallery { print: Some(name), .. } => {
            let e = gallery::find(&name).ok_or_else(|| CliError::Config(format!("no gallery scenario `{name}`")))?;
            print!("{}", e.text);
            Ok(0)
        }
        Command::Gallery { run: true, out_dir, .. } => {
            let mut worst = 0;
            for e in GALLERY {
                println!("== {}", e.name);
                let code = execute(&parse_scenario(e.text)?, &out_dir)?;
                worst = worst.max(code);
            }
            Ok(worst)
        }
        Command::Check { scenario } => {
            let s = load(&scenario)?;
            println!("{}: ok ({} points, k = {}, checks: {})", s.name, s.set_size, s.dimension, s.checks.len());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let code = match main_inner(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.class_name());
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
