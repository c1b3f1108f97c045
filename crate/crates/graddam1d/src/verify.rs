//! Randomised check of the discontinuous Galerkin nonlocal strain against
//! the finite-difference formula on uniform grids.

use graddam1d_core::fd_oracle::{fd_eps_bar, fd_jump_at_node};
use graddam1d_core::{nonlocal_strain, AreaProfile, MaterialParams, Mesh1D};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::AppError;

/// Acceptance bound on the element-wise relative deviation.
pub const MAX_DEVIATION: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub n_elements: usize,
    pub length: f64,
    pub c: f64,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub trials: Vec<Trial>,
}

impl VerifyReport {
    pub fn max_deviation(&self) -> f64 {
        self.trials
            .iter()
            .map(|t| t.max_deviation)
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() <= MAX_DEVIATION
    }
}

/// Largest element-wise relative deviation between the two routes for one
/// nodal displacement field.
///
/// The deviation of element `e` is measured relative to the largest of
/// `|eps_bar_fd|` and the magnitudes of the terms it is summed from
/// (`|eps_e|` and `c^2/h |u''|` at both nodes), which is the scale at which
/// the two routes round differently.
pub fn field_deviation(mesh: &Mesh1D, a: &[f64], c: f64) -> Result<f64, AppError> {
    let n = mesh.n_elements();
    let h = mesh.length() / n as f64;
    let params =
        MaterialParams::new(1.0, 1e-4, 1e-2, c).map_err(|e| AppError::Config(e.to_string()))?;
    let dg = nonlocal_strain(mesh, a, &params).map_err(|e| AppError::Config(e.to_string()))?;
    let mut worst: f64 = 0.0;
    for (e, &dg_e) in dg.iter().enumerate() {
        let fd = fd_eps_bar(a, e, c, h).map_err(|e| AppError::Config(e.to_string()))?;
        let mut scale = fd.abs().max(((a[e + 1] - a[e]) / h).abs());
        for j in [e, e + 1] {
            if let Ok(jump) = fd_jump_at_node(a, j, h) {
                scale = scale.max(c * c / h * jump.abs());
            }
        }
        if scale > 0.0 {
            worst = worst.max((dg_e - fd).abs() / scale);
        }
    }
    Ok(worst)
}

/// Random uniform meshes of 10 to 400 elements (element size between 1/64
/// and 4 mm) with random displacement fields, length scale and area.
pub fn run_trials(trials: usize, seed: u64) -> Result<VerifyReport, AppError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let n = rng.gen_range(10..=400);
        // dyadic element size keeps every node coordinate exact, so both
        // routes see the same h
        let h = rng.gen_range(1..=256) as f64 / 64.0;
        let length = h * n as f64;
        let c = rng.gen_range(0.0..3.0);
        let area = rng.gen_range(0.5..2.0);
        let mesh = Mesh1D::uniform(length, n, AreaProfile::Uniform { area })
            .map_err(|e| AppError::Config(e.to_string()))?;
        let a: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0) * h).collect();
        out.push(Trial {
            n_elements: n,
            length,
            c,
            max_deviation: field_deviation(&mesh, &a, c)?,
        });
    }
    Ok(VerifyReport { trials: out })
}
