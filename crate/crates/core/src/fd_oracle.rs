//! Finite-difference form of the nonlocal strain on a uniform grid.
//!
//! On equally spaced nodes the interface jump of the element strain is a
//! central second difference of the displacement, and the discontinuous
//! Galerkin `eps_bar` of an element reduces to
//!
//! ```text
//! eps_bar_e = eps_e + c^2 / h * (u''(right node) - u''(left node))
//! ```
//!
//! This module evaluates that expression directly from nodal values. It
//! shares no code with the element and interface kernels and serves as an
//! independent check on them. At the bar ends there is no interface, which
//! corresponds to the natural condition `grad eps_eq . n = 0`; the oracle
//! mirrors it by taking `u'' = 0` at boundary nodes.

use crate::{Error, Result};

/// `[[eps_eq]] / h` at interior node `j`, i.e. `-(a[j-1] - 2 a[j] + a[j+1]) / h^2`.
pub fn fd_jump_at_node(a: &[f64], j: usize, h: f64) -> Result<f64> {
    if j == 0 || j + 1 >= a.len() {
        return Err(Error::Lookup {
            what: "interior node",
            index: j,
            len: a.len(),
        });
    }
    Ok(-(a[j - 1] - 2.0 * a[j] + a[j + 1]) / (h * h))
}

/// Second difference at node `j`, zero at the two boundary nodes.
fn curvature(a: &[f64], j: usize, h: f64) -> f64 {
    fd_jump_at_node(a, j, h).map(|v| -v).unwrap_or(0.0)
}

/// Nonlocal strain of element `e` (between nodes `e` and `e + 1`).
pub fn fd_eps_bar(a: &[f64], e: usize, c: f64, h: f64) -> Result<f64> {
    if e + 1 >= a.len() {
        return Err(Error::Lookup {
            what: "element",
            index: e,
            len: a.len().saturating_sub(1),
        });
    }
    let strain = (a[e + 1] - a[e]) / h;
    Ok(strain + c * c / h * (curvature(a, e + 1, h) - curvature(a, e, h)))
}

/// [`fd_eps_bar`] for every element.
pub fn fd_eps_bar_field(a: &[f64], c: f64, h: f64) -> alloc::vec::Vec<f64> {
    (0..a.len().saturating_sub(1))
        .map(|e| fd_eps_bar(a, e, c, h).expect("element index in range"))
        .collect()
}
