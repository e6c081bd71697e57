use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qrabi::jc::{jc_ground_index, jc_spectrum, JcState};
use qrabi::sweep::{equivalence_table, fmt_float, run_sweep, validate_config, SweepError, SweepSpec};
use qrabi::Error;

#[derive(Parser)]
#[command(name = "qrabi", version, about = "Quantum Rabi model spectra, photon observables and bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep described by a JSON config and write CSV files.
    Sweep {
        config: PathBuf,
        /// Worker threads (defaults to the number of CPUs).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the resonant Jaynes–Cummings spectrum and its ground-state index.
    Jc {
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        g: f64,
        /// Highest doublet n to list.
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// Compare spectra of the A² Hamiltonian and its renormalized form over the config grid.
    CheckEquivalence {
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn load(path: &PathBuf) -> Result<SweepSpec, SweepError> {
    let raw = std::fs::read(path).map_err(|e| SweepError::Io(format!("{}: {e}", path.display())))?;
    validate_config(&raw).map_err(SweepError::Config)
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn report_failures(failures: &[(f64, String)]) {
    for (x, msg) in failures {
        eprintln!("g/omega={x}: {msg}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep { config, workers } => {
            let spec = match load(&config) {
                Ok(s) => s,
                Err(e) => {
                    eprint!("{e}");
                    return code(e.exit_code());
                }
            };
            match run_sweep(&spec, workers) {
                Ok(outcome) => {
                    for f in &outcome.files {
                        println!("{}", f.display());
                    }
                    report_failures(&outcome.failures);
                    code(outcome.exit_code())
                }
                Err(e) => {
                    eprintln!("{e}");
                    code(e.exit_code())
                }
            }
        }
        Command::Jc { omega, g, max_n } => {
            let levels = match jc_spectrum(omega, g, max_n) {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("{e}");
                    return code(2);
                }
            };
            match jc_ground_index(omega, g) {
                Ok(i) => println!("# ground_index={i}"),
                Err(Error::Degenerate { .. }) => println!("# ground_index=degenerate"),
                Err(e) => {
                    eprintln!("{e}");
                    return code(2);
                }
            }
            println!("index,energy,state");
            for l in levels {
                let state = match l.state {
                    JcState::SeparableVacuum => "vacuum".to_string(),
                    JcState::Entangled { n, sign } => format!("n={n};sign={sign}"),
                };
                println!("{},{},{state}", l.index, fmt_float(l.energy));
            }
            ExitCode::SUCCESS
        }
        Command::CheckEquivalence { config, workers } => {
            let spec = match load(&config) {
                Ok(s) => s,
                Err(e) => {
                    eprint!("{e}");
                    return code(e.exit_code());
                }
            };
            match equivalence_table(&spec, workers) {
                Ok((table, failures)) => {
                    print!("{table}");
                    report_failures(&failures);
                    code(if failures.is_empty() { 0 } else { 3 })
                }
                Err(e) => {
                    eprintln!("{e}");
                    code(e.exit_code())
                }
            }
        }
    }
}
