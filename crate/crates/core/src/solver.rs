//! Displacement-controlled Newton-Raphson driver.
//!
//! The left end is fixed and the right end displacement is raised in equal
//! increments. Within a step the history is evaluated fully implicitly,
//! `kappa_trial = max(kappa_committed, eps_bar)`, and only committed once the
//! step converges. Failed steps are retried with halved increments.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::assembly::{apply_dirichlet, assemble, DofMap, GlobalSystem, Prescribed};
use crate::material::{DamageHistory, MaterialParams};
use crate::mesh::Mesh1D;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub n_steps: usize,
    /// Right-end displacement reached after the last step (mm).
    pub total_end_displacement: f64,
    /// Relative tolerance on the scaled residual norm.
    pub newton_tol: f64,
    /// Absolute floor on the scaled residual norm.
    pub abs_tol: f64,
    pub max_iters: usize,
    /// Number of times a failing increment may be halved.
    pub max_halvings: u32,
    /// Consecutive residual increases that abort a step.
    pub divergence_window: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n_steps: 200,
            total_end_displacement: 0.1,
            newton_tol: 1e-8,
            abs_tol: 1e-12,
            max_iters: 30,
            max_halvings: 4,
            divergence_window: 4,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_steps < 1 {
            return Err(Error::Config("n_steps must be at least 1"));
        }
        if !self.total_end_displacement.is_finite() {
            return Err(Error::Config("end displacement must be finite"));
        }
        if !(self.newton_tol > 0.0) {
            return Err(Error::Config("newton_tol must be positive"));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::Config("abs_tol must be non-negative"));
        }
        if self.max_iters < 1 {
            return Err(Error::Config("max_iters must be at least 1"));
        }
        if self.divergence_window < 1 {
            return Err(Error::Config("divergence_window must be at least 1"));
        }
        Ok(())
    }
}

/// Converged state after one load step.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadStepRecord {
    pub step: usize,
    pub applied_displacement: f64,
    /// Internal force at the loaded (right) end.
    pub reaction: f64,
    /// Internal force at the fixed (left) end.
    pub reaction_left: f64,
    pub displacement: Vec<f64>,
    pub strain: Vec<f64>,
    pub eps_bar: Vec<f64>,
    /// Committed history after the step.
    pub kappa: Vec<f64>,
    /// Committed history before the last converged sub-increment. Equals the
    /// previous step's `kappa` unless the step was halved.
    pub kappa_prior: Vec<f64>,
    /// Converged sub-increments (1 without halving).
    pub sub_increments: usize,
    pub omega: Vec<f64>,
    /// Newton iterations summed over all sub-increments of the step.
    pub iterations: usize,
}

impl LoadStepRecord {
    pub fn max_omega(&self) -> f64 {
        self.omega.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FailureKind {
    NotConverged,
    Diverged,
    Kernel(Error),
}

/// A step that could not be converged even after increment halving.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFailure {
    pub step: usize,
    /// Right-end displacement at the start of the failing sub-increment.
    pub applied_displacement: f64,
    pub increment: f64,
    pub kind: FailureKind,
    /// Scaled residual norms of the last attempt.
    pub residual_history: Vec<f64>,
}

impl fmt::Display for StepFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.kind {
            FailureKind::NotConverged => "no convergence",
            FailureKind::Diverged => "divergence",
            FailureKind::Kernel(_) => "kernel error",
        };
        write!(
            f,
            "step {} failed ({what}) at applied displacement {:e} with increment {:e}",
            self.step, self.applied_displacement, self.increment
        )?;
        if let FailureKind::Kernel(e) = &self.kind {
            write!(f, ": {e}")?;
        }
        if !self.residual_history.is_empty() {
            write!(f, "; residual history:")?;
            for r in &self.residual_history {
                write!(f, " {r:.3e}")?;
            }
        }
        Ok(())
    }
}

/// Outcome of a run that stopped early. Records of completed steps are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub records: Vec<LoadStepRecord>,
    pub failure: StepFailure,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} steps completed)",
            self.failure,
            self.records.len()
        )
    }
}

/// Result of a converged Newton solve, not yet committed.
#[derive(Debug, Clone)]
pub struct NewtonReport {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    /// Scale the relative tolerance was measured against.
    pub reference_norm: f64,
    pub system: GlobalSystem,
}

/// Mutable solver state: unknowns, committed history and load level.
#[derive(Debug, Clone)]
pub struct Simulation {
    mesh: Mesh1D,
    params: MaterialParams,
    config: SolverConfig,
    dofs: DofMap,
    x: Vec<f64>,
    history: DamageHistory,
    applied: f64,
    reference_norm: f64,
    eps_weight: f64,
}

impl Simulation {
    pub fn new(mesh: Mesh1D, params: MaterialParams, config: SolverConfig) -> Result<Self> {
        params.validate()?;
        config.validate()?;
        let dofs = DofMap::new(&mesh);
        let mean_h = mesh.length() / mesh.n_elements() as f64;
        Ok(Simulation {
            x: vec![0.0; dofs.total_dofs()],
            history: DamageHistory::new(mesh.n_elements()),
            applied: 0.0,
            reference_norm: 0.0,
            // E / h turns an eps_bar residual (strain x volume) into a force
            eps_weight: params.youngs_modulus / mean_h,
            mesh,
            params,
            config,
            dofs,
        })
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn params(&self) -> &MaterialParams {
        &self.params
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn dofs(&self) -> &DofMap {
        &self.dofs
    }

    pub fn unknowns(&self) -> &[f64] {
        &self.x
    }

    pub fn history(&self) -> &DamageHistory {
        &self.history
    }

    pub fn applied_displacement(&self) -> f64 {
        self.applied
    }

    fn fixed_dof(&self) -> usize {
        self.dofs.displacement_dof(0)
    }

    fn loaded_dof(&self) -> usize {
        self.dofs.displacement_dof(self.mesh.n_nodes() - 1)
    }

    /// Euclidean norm over free DOFs, `eps_bar` rows weighted into force units.
    pub fn scaled_norm(&self, r: &[f64]) -> f64 {
        let (a, b) = (self.fixed_dof(), self.loaded_dof());
        let mut s = 0.0;
        for (i, &v) in r.iter().enumerate() {
            if i == a || i == b {
                continue;
            }
            let w = if self.dofs.is_displacement(i) {
                1.0
            } else {
                self.eps_weight
            };
            s += (w * v) * (w * v);
        }
        libm::sqrt(s)
    }

    pub fn assemble_at(&self, x: &[f64]) -> Result<GlobalSystem> {
        assemble(&self.mesh, &self.dofs, x, &self.history, &self.params)
    }

    /// Full Newton from the current committed state with the right-end
    /// displacement raised by `increment`. The prescribed increment enters
    /// through the first linear solve, using the tangent at the converged
    /// state of the previous step.
    ///
    /// Converged when the scaled free residual drops below
    /// `max(newton_tol * reference, abs_tol)`, where the reference is the
    /// larger of the first right-hand side of this step and every earlier one.
    pub fn newton_iterate(
        &self,
        increment: f64,
    ) -> core::result::Result<NewtonReport, StepFailure> {
        let cfg = &self.config;
        let fail = |kind, residual_history| StepFailure {
            step: 0,
            applied_displacement: self.applied,
            increment,
            kind,
            residual_history,
        };
        let mut x = self.x.clone();
        let mut pending = increment;
        let mut reference = self.reference_norm;
        let mut norms: Vec<f64> = Vec::new();
        let mut iterations = 0;
        let mut rising = 0;
        loop {
            let sys = match self.assemble_at(&x) {
                Ok(s) => s,
                Err(e) => return Err(fail(FailureKind::Kernel(e), norms)),
            };
            let norm = self.scaled_norm(&sys.residual);
            if pending == 0.0 {
                if !norm.is_finite() {
                    return Err(fail(FailureKind::Diverged, norms));
                }
                if let Some(&prev) = norms.last() {
                    rising = if norm > prev { rising + 1 } else { 0 };
                }
                norms.push(norm);
                if norm <= (cfg.newton_tol * reference).max(cfg.abs_tol) {
                    return Ok(NewtonReport {
                        x,
                        iterations,
                        residual_history: norms,
                        reference_norm: reference,
                        system: sys,
                    });
                }
                if iterations >= cfg.max_iters {
                    return Err(fail(FailureKind::NotConverged, norms));
                }
                if rising >= cfg.divergence_window {
                    return Err(fail(FailureKind::Diverged, norms));
                }
            }
            let bc = [
                Prescribed {
                    dof: self.fixed_dof(),
                    increment: 0.0,
                },
                Prescribed {
                    dof: self.loaded_dof(),
                    increment: pending,
                },
            ];
            let reduced = match apply_dirichlet(&sys, &bc) {
                Ok(r) => r,
                Err(e) => return Err(fail(FailureKind::Kernel(e), norms)),
            };
            if pending != 0.0 {
                reference = reference.max(self.scaled_norm(&reduced.rhs));
            }
            let dx = match reduced.solve() {
                Ok(dx) => dx,
                Err(e) => return Err(fail(FailureKind::Kernel(e), norms)),
            };
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
            pending = 0.0;
            iterations += 1;
        }
    }

    fn commit(&mut self, report: &NewtonReport, increment: f64) -> Result<()> {
        let eps_bar = self.dofs.eps_bar(&report.x);
        self.history.commit(&eps_bar)?;
        self.x.clone_from(&report.x);
        self.applied += increment;
        self.reference_norm = self.reference_norm.max(report.reference_norm);
        Ok(())
    }

    /// Advances the load by `increment`, halving on failure, and returns the
    /// converged record. On failure the state is left at the last converged
    /// sub-increment.
    pub fn step(
        &mut self,
        step: usize,
        increment: f64,
    ) -> core::result::Result<LoadStepRecord, StepFailure> {
        let mut pending: Vec<(f64, u32)> = vec![(increment, 0)];
        let mut iterations = 0;
        let mut sub_increments = 0;
        let mut kappa_prior = Vec::new();
        let mut last: Option<NewtonReport> = None;
        while let Some((inc, depth)) = pending.pop() {
            match self.newton_iterate(inc) {
                Ok(report) => {
                    kappa_prior = self.history.committed().to_vec();
                    if let Err(e) = self.commit(&report, inc) {
                        return Err(StepFailure {
                            step,
                            applied_displacement: self.applied,
                            increment: inc,
                            kind: FailureKind::Kernel(e),
                            residual_history: report.residual_history,
                        });
                    }
                    iterations += report.iterations;
                    sub_increments += 1;
                    last = Some(report);
                }
                Err(mut f) if depth >= self.config.max_halvings => {
                    f.step = step;
                    return Err(f);
                }
                Err(_) => {
                    pending.push((0.5 * inc, depth + 1));
                    pending.push((0.5 * inc, depth + 1));
                }
            }
        }
        let report = last.expect("at least one sub-increment converged");
        Ok(LoadStepRecord {
            kappa_prior,
            sub_increments,
            ..self.record(step, &report.system, iterations)
        })
    }

    fn record(&self, step: usize, sys: &GlobalSystem, iterations: usize) -> LoadStepRecord {
        LoadStepRecord {
            step,
            applied_displacement: self.applied,
            reaction: sys.residual[self.loaded_dof()],
            reaction_left: sys.residual[self.fixed_dof()],
            displacement: self.dofs.displacements(&self.x),
            strain: sys.elements.iter().map(|o| o.strain).collect(),
            eps_bar: self.dofs.eps_bar(&self.x),
            kappa: self.history.committed().to_vec(),
            kappa_prior: Vec::new(),
            sub_increments: 0,
            omega: sys.elements.iter().map(|o| o.omega).collect(),
            iterations,
        }
    }
}

/// Runs all load steps. Stops at the first step that fails after halving
/// and returns the completed records together with the failure.
pub fn run_simulation(
    mesh: &Mesh1D,
    params: &MaterialParams,
    config: &SolverConfig,
) -> core::result::Result<Vec<LoadStepRecord>, RunFailure> {
    let config_failure = |e: Error| RunFailure {
        records: Vec::new(),
        failure: StepFailure {
            step: 0,
            applied_displacement: 0.0,
            increment: 0.0,
            kind: FailureKind::Kernel(e),
            residual_history: Vec::new(),
        },
    };
    let mut sim = Simulation::new(mesh.clone(), *params, *config).map_err(config_failure)?;
    let du = config.total_end_displacement / config.n_steps as f64;
    let mut records = Vec::with_capacity(config.n_steps);
    for step in 1..=config.n_steps {
        match sim.step(step, du) {
            Ok(rec) => records.push(rec),
            Err(failure) => return Err(RunFailure { records, failure }),
        }
    }
    Ok(records)
}
