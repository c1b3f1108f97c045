//! Command line front end for the gradient-damage bar solver: run
//! configuration files, benchmark presets, CSV output and the
//! finite-difference verification.

use std::path::{Path, PathBuf};

use graddam1d_core::{run_simulation, LoadStepRecord, RunFailure};

pub mod config;
pub mod output;
pub mod preset;
pub mod verify;

pub use config::{Problem, RunConfig};
pub use preset::preset;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(Box<RunFailure>),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl AppError {
    /// 1 for configuration problems, 2 for solver, verification and I/O
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 1,
            AppError::Solver(_) | AppError::Verification(_) | AppError::Io(_) => 2,
        }
    }
}

#[derive(Debug)]
pub struct RunOutput {
    pub records: Vec<LoadStepRecord>,
    pub files: Vec<PathBuf>,
}

/// Solves `config` and writes its outputs into `out_dir`. A solver failure
/// still writes the completed steps before returning the error.
pub fn run_config(config: &RunConfig, out_dir: &Path) -> Result<RunOutput, AppError> {
    let Problem {
        mesh,
        params,
        solver,
    } = config.problem()?;
    match run_simulation(&mesh, &params, &solver) {
        Ok(records) => {
            let files =
                output::write_all(out_dir, &mesh, &records, &config.output.profile_steps, None)?;
            Ok(RunOutput { records, files })
        }
        Err(failure) => {
            output::write_all(
                out_dir,
                &mesh,
                &failure.records,
                &config.output.profile_steps,
                Some(&failure.failure),
            )?;
            Err(AppError::Solver(Box::new(failure)))
        }
    }
}
