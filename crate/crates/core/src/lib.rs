//! One-dimensional gradient-enhanced damage solver.
//!
//! The displacement field is interpolated with continuous piecewise-linear
//! functions and the nonlocal equivalent strain `eps_bar` is piecewise
//! constant per element. Continuity of the local equivalent strain is
//! enforced weakly through an interior-penalty term with weight `c^2 / h` on
//! every inter-element interface, so no C1 shape functions are needed.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, presets and the
//! command line live in the `graddam1d` companion crate.

#![no_std]
// index loops mirror the band storage; `!(x > 0.0)` also rejects NaN
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod assembly;
pub mod banded;
pub mod element;
mod error;
pub mod fd_oracle;
pub mod material;
pub mod mesh;
pub mod solver;

pub use crate::assembly::{
    apply_dirichlet, assemble, nonlocal_strain, DofMap, GlobalSystem, Prescribed, ReducedSystem,
};
pub use crate::banded::BandMatrix;
pub use crate::element::{
    element_kernel, interface_kernel, ElementGeometry, ElementKernelOutput, ElementState,
    InterfaceKernelOutput, InterfaceSide,
};
pub use crate::error::Error;
pub use crate::material::{DamageHistory, MaterialParams};
pub use crate::mesh::{AreaProfile, Mesh1D};
pub use crate::solver::{
    run_simulation, LoadStepRecord, NewtonReport, RunFailure, Simulation, SolverConfig, StepFailure,
};

pub type Result<T> = core::result::Result<T, Error>;
