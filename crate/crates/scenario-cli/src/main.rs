//! Command-line front end: evaluate scenario files, sweep a parameter,
//! print built-in presets, and run the verification table.
//!
//! Exit codes: 0 success, 1 invalid input, 2 solver failure.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use qstate_discrim::oracle::OracleConfig;
use scenario_cli::error::{CliError, Result};
use scenario_cli::scenario::SweepSpec;
use scenario_cli::{checks, presets, run, scenario};

#[derive(Parser)]
#[command(name = "scenario-cli", version, about = "Qubit guessing games under classical side information")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario file and print or write its result table.
    Evaluate {
        file: PathBuf,
        /// Cross-check every value against the independent solvers.
        #[arg(long)]
        oracle: bool,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a parameter of a scenario file over a linear range.
    Sweep {
        file: PathBuf,
        /// Parameter to sweep; only "theta" is supported.
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Cross-check every value against the independent solvers.
        #[arg(long)]
        oracle: bool,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a built-in scenario document.
    Preset { name: String },
    /// Run the built-in verification table and print pass/fail lines.
    Check,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let cfg = OracleConfig::default();
    match cli.command {
        Command::Evaluate { file, oracle, out } => {
            let doc = scenario::parse_scenario(&std::fs::read_to_string(file)?)?;
            let rows = run::run_evaluation(&doc, oracle, &cfg)?;
            emit(&rows, out.as_deref())?;
            Ok(0)
        }
        Command::Sweep {
            file,
            param,
            from,
            to,
            steps,
            oracle,
            out,
        } => {
            let mut doc = scenario::parse_scenario(&std::fs::read_to_string(file)?)?;
            let binding = match doc.sweep.take() {
                Some(sweep) => sweep.binding,
                None => {
                    return Err(CliError::Validation(format!(
                        "scenario {:?} declares no sweep binding",
                        doc.name
                    )))
                }
            };
            doc.sweep = Some(SweepSpec {
                parameter: param,
                start: from,
                stop: to,
                steps,
                binding,
            });
            doc.validate()?;
            let rows = run::run_evaluation(&doc, oracle, &cfg)?;
            emit(&rows, out.as_deref())?;
            Ok(0)
        }
        Command::Preset { name } => match presets::preset(&name) {
            Some(doc) => {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc)
                        .expect("presets serialize")
                );
                Ok(0)
            }
            None => Err(CliError::Validation(format!(
                "unknown preset {name:?}; available: {}",
                presets::PRESET_NAMES.join(", ")
            ))),
        },
        Command::Check => {
            let mut failed = false;
            for (name, outcome) in checks::run_all(&cfg) {
                match outcome {
                    Ok(detail) => println!("PASS {name}: {detail}"),
                    Err(detail) => {
                        failed = true;
                        println!("FAIL {name}: {detail}");
                    }
                }
            }
            Ok(if failed { 1 } else { 0 })
        }
    }
}

fn emit(rows: &[run::ResultRow], out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => run::sweep_to_csv(rows, path),
        None => {
            print!("{}", run::rows_to_csv(rows));
            Ok(())
        }
    }
}
