use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use graddam1d::{preset, run_config, verify, AppError, RunConfig};

#[derive(Parser)]
#[command(
    name = "graddam1d",
    version,
    about = "1D gradient-enhanced damage bar solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation described by a TOML configuration file.
    Run { config: PathBuf },
    /// Run a benchmark preset (tapered, narrow, local_tapered).
    Preset {
        name: String,
        #[arg(long)]
        n_elements: Option<usize>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Only print the preset configuration.
        #[arg(long)]
        print: bool,
    },
    /// Compare the discontinuous Galerkin nonlocal strain with the
    /// finite-difference formula on random fields.
    Verify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn run(cfg: &RunConfig, out: PathBuf) -> Result<(), AppError> {
    let res = run_config(cfg, &out)?;
    let peak = res
        .records
        .iter()
        .map(|r| r.reaction)
        .fold(f64::MIN, f64::max);
    println!(
        "{} steps, peak reaction {peak:.6} N, outputs in {}",
        res.records.len(),
        out.display()
    );
    Ok(())
}

fn execute(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Run { config } => {
            let cfg = RunConfig::load(&config)?;
            let out = cfg.output.directory.clone();
            run(&cfg, out)
        }
        Command::Preset {
            name,
            n_elements,
            c,
            out,
            print,
        } => {
            let mut cfg = preset(&name)?;
            if let Some(n) = n_elements {
                cfg.mesh.n_elements = n;
            }
            if let Some(c) = c {
                cfg.material.c = c;
            }
            if let Some(out) = out {
                cfg.output.directory = out;
            }
            if print {
                print!("{}", cfg.to_toml_string());
                return Ok(());
            }
            let out = cfg.output.directory.clone();
            std::fs::create_dir_all(&out)?;
            std::fs::write(out.join("config.toml"), cfg.to_toml_string())?;
            run(&cfg, out)
        }
        Command::Verify { trials, seed } => {
            let report = verify::run_trials(trials, seed)?;
            let max = report.max_deviation();
            println!("trials: {}", report.trials.len());
            println!("max relative deviation: {max:.3e}");
            if report.passed() {
                Ok(())
            } else {
                Err(AppError::Verification(format!(
                    "deviation {max:.3e} exceeds {:.0e}",
                    verify::MAX_DEVIATION
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
