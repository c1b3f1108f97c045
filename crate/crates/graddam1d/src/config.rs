//! Run configuration file (TOML).

use std::path::{Path, PathBuf};

use graddam1d_core::{AreaProfile, MaterialParams, Mesh1D, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::AppError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub material: MaterialConfig,
    pub mesh: MeshConfig,
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// Bar length (mm).
    pub length: f64,
    pub area: AreaConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AreaConfig {
    Uniform {
        area: f64,
    },
    LinearTaper {
        end_area: f64,
        center_area: f64,
    },
    NarrowCenter {
        end_area: f64,
        center_area: f64,
        narrow_span: f64,
    },
}

impl From<AreaConfig> for AreaProfile {
    fn from(a: AreaConfig) -> Self {
        match a {
            AreaConfig::Uniform { area } => AreaProfile::Uniform { area },
            AreaConfig::LinearTaper {
                end_area,
                center_area,
            } => AreaProfile::LinearTaper {
                end_area,
                center_area,
            },
            AreaConfig::NarrowCenter {
                end_area,
                center_area,
                narrow_span,
            } => AreaProfile::NarrowCenter {
                end_area,
                center_area,
                narrow_span,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    /// Young's modulus (MPa).
    #[serde(rename = "E")]
    pub youngs_modulus: f64,
    pub kappa0: f64,
    pub kappa_c: f64,
    /// Gradient length scale (mm).
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    pub n_elements: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub n_steps: usize,
    /// Right-end displacement after the last step (mm).
    pub end_displacement: f64,
    #[serde(default = "default_tol")]
    pub newton_tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
}

fn default_tol() -> f64 {
    1e-8
}

fn default_max_iters() -> usize {
    30
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub directory: PathBuf,
    /// Steps for which a damage/strain profile is written. The last step is
    /// always written.
    #[serde(default)]
    pub profile_steps: Vec<usize>,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: default_out_dir(),
            profile_steps: Vec::new(),
        }
    }
}

/// Validated inputs for the core solver.
#[derive(Debug, Clone)]
pub struct Problem {
    pub mesh: Mesh1D,
    pub params: MaterialParams,
    pub solver: SolverConfig,
}

fn field_err(field: &str, e: impl std::fmt::Display) -> AppError {
    AppError::Config(format!("{field}: {e}"))
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, AppError> {
        toml::from_str(s).map_err(|e| AppError::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every section and builds the mesh, material and solver settings.
    pub fn problem(&self) -> Result<Problem, AppError> {
        let m = &self.material;
        let params = MaterialParams::new(m.youngs_modulus, m.kappa0, m.kappa_c, m.c)
            .map_err(|e| field_err("material", e))?;
        let mesh = Mesh1D::uniform(
            self.geometry.length,
            self.mesh.n_elements,
            self.geometry.area.into(),
        )
        .map_err(|e| field_err("geometry/mesh", e))?;
        let solver = SolverConfig {
            n_steps: self.solver.n_steps,
            total_end_displacement: self.solver.end_displacement,
            newton_tol: self.solver.newton_tol,
            max_iters: self.solver.max_iters,
            ..SolverConfig::default()
        };
        solver.validate().map_err(|e| field_err("solver", e))?;
        for &s in &self.output.profile_steps {
            if s == 0 || s > self.solver.n_steps {
                return Err(AppError::Config(format!(
                    "output.profile_steps: step {s} outside 1..={}",
                    self.solver.n_steps
                )));
            }
        }
        Ok(Problem {
            mesh,
            params,
            solver,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::{preset, PRESETS};

    #[test]
    fn presets_round_trip() {
        for name in PRESETS {
            let cfg = preset(name).unwrap();
            let back = RunConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
            assert_eq!(cfg, back);
            cfg.problem().unwrap();
        }
    }

    #[test]
    fn missing_modulus_is_named() {
        let text = preset("tapered")
            .unwrap()
            .to_toml_string()
            .replace("E = 20000.0\n", "");
        assert!(!text.contains("E = "));
        let err = RunConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("`E`"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn invalid_values_are_config_errors() {
        let mut cfg = preset("tapered").unwrap();
        cfg.material.kappa_c = 1e-5;
        assert!(cfg.problem().unwrap_err().to_string().contains("material"));
        let mut cfg = preset("tapered").unwrap();
        cfg.mesh.n_elements = 1;
        assert!(cfg.problem().is_err());
        let mut cfg = preset("tapered").unwrap();
        cfg.output.profile_steps = vec![cfg.solver.n_steps + 1];
        assert!(cfg.problem().is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = preset("narrow").unwrap().to_toml_string() + "\n[extra]\nx = 1\n";
        assert!(RunConfig::from_toml_str(&text).is_err());
    }
}
