//! Benchmark configurations.
//!
//! Material data: E = 20e3 MPa, kappa0 = 1e-4, kappa_c = 0.0125, c = 1 mm.
//! Bar length, end displacement and step count are not fixed by the
//! benchmark description; the defaults below (100 mm, 0.06 mm, 200 steps)
//! drive every preset well into the softening branch.

use std::path::PathBuf;

use crate::config::{
    AreaConfig, GeometryConfig, MaterialConfig, MeshConfig, OutputConfig, RunConfig, SolverSection,
};
use crate::AppError;

pub const PRESETS: [&str; 3] = ["tapered", "narrow", "local_tapered"];

pub const BAR_LENGTH: f64 = 100.0;
pub const END_DISPLACEMENT: f64 = 0.06;
pub const N_STEPS: usize = 200;

const MATERIAL: MaterialConfig = MaterialConfig {
    youngs_modulus: 20.0e3,
    kappa0: 1.0e-4,
    kappa_c: 0.0125,
    c: 1.0,
};

const TAPER: AreaConfig = AreaConfig::LinearTaper {
    end_area: 1.0,
    center_area: 0.8,
};

const NARROW: AreaConfig = AreaConfig::NarrowCenter {
    end_area: 1.0,
    center_area: 0.8,
    narrow_span: 0.1 * BAR_LENGTH,
};

fn base(name: &str, area: AreaConfig, c: f64) -> RunConfig {
    RunConfig {
        geometry: GeometryConfig {
            length: BAR_LENGTH,
            area,
        },
        material: MaterialConfig { c, ..MATERIAL },
        mesh: MeshConfig { n_elements: 100 },
        solver: SolverSection {
            n_steps: N_STEPS,
            end_displacement: END_DISPLACEMENT,
            newton_tol: 1e-8,
            max_iters: 30,
        },
        output: OutputConfig {
            directory: PathBuf::from("out").join(name),
            profile_steps: vec![50, 100, 150],
        },
    }
}

pub fn preset(name: &str) -> Result<RunConfig, AppError> {
    match name {
        "tapered" => Ok(base(name, TAPER, 1.0)),
        "narrow" => Ok(base(name, NARROW, 1.0)),
        "local_tapered" => Ok(base(name, TAPER, 0.0)),
        _ => Err(AppError::Config(format!(
            "unknown preset `{name}`; valid presets: {}",
            PRESETS.join(", ")
        ))),
    }
}
