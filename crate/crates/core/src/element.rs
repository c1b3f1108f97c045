//! Element and interface kernels for linear displacement / constant `eps_bar`.
//!
//! Every integrand is constant over an element, so a one-point rule is
//! exact. Residual sign convention: `r_u` is the internal nodal force vector
//! and `r_eps` is the residual of the nonlocal strain equation
//!
//! ```text
//! A h (eps_bar - eps_eq) + sum_interfaces A_avg c^2 / h_avg [[q]] [[eps_eq]] = 0
//! ```
//!
//! with the jump `[[a]] = a_1 n_1 + a_2 n_2`, `n_1 = +1` on the left element
//! and `n_2 = -1` on the right one. The higher-order interface terms of the
//! general form (average gradients of `q` and `eps_eq`) vanish identically for
//! this interpolation and are not evaluated.

use crate::material::{equivalent_strain, equivalent_strain_derivative, MaterialParams};
use crate::{Error, Result};

/// Cap on `omega` used in the stiffness only, keeping `k_uu` nonsingular for
/// fully damaged elements. The residual always sees the true damage.
pub const STIFFNESS_DAMAGE_CAP: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGeometry {
    pub length: f64,
    pub area: f64,
}

impl ElementGeometry {
    pub fn volume(&self) -> f64 {
        self.length * self.area
    }

    /// Strain-displacement row `B = [-1/h, 1/h]`.
    pub fn b(&self) -> [f64; 2] {
        [-1.0 / self.length, 1.0 / self.length]
    }

    pub fn strain(&self, u: [f64; 2]) -> f64 {
        (u[1] - u[0]) / self.length
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementState {
    pub u: [f64; 2],
    pub eps_bar: f64,
    pub kappa_committed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ElementKernelOutput {
    pub r_u: [f64; 2],
    pub r_eps: f64,
    pub k_uu: [[f64; 2]; 2],
    pub k_ueps: [f64; 2],
    pub k_epsu: [f64; 2],
    pub k_epseps: f64,
    pub strain: f64,
    pub kappa_trial: f64,
    pub omega: f64,
    /// `eps_bar > kappa_committed`: the history grows if this state is committed.
    pub loading: bool,
}

pub fn element_kernel(
    geom: ElementGeometry,
    state: ElementState,
    params: &MaterialParams,
) -> Result<ElementKernelOutput> {
    if !(geom.length > 0.0) || !(geom.area > 0.0) {
        return Err(Error::Geometry("element length and area must be positive"));
    }
    if !(state.kappa_committed >= 0.0) {
        return Err(Error::Domain {
            what: "history parameter",
            value: state.kappa_committed,
        });
    }
    let e_mod = params.youngs_modulus;
    let (h, a) = (geom.length, geom.area);
    let vol = geom.volume();
    let b = geom.b();
    let strain = geom.strain(state.u);
    let eps_eq = equivalent_strain(strain);
    let deq = equivalent_strain_derivative(strain);

    let (kappa_trial, loading) =
        crate::material::update_history(state.kappa_committed, state.eps_bar);
    let omega = params.damage_unchecked(kappa_trial);
    // one-sided derivative: taken on the loading side when f >= 0
    let domega = if state.eps_bar >= state.kappa_committed && state.eps_bar > 0.0 {
        params.damage_derivative_unchecked(kappa_trial)
    } else {
        0.0
    };

    let sigma = (1.0 - omega) * e_mod * strain;
    let r_u = [b[0] * sigma * vol, b[1] * sigma * vol];
    let r_eps = (state.eps_bar - eps_eq) * vol;

    let kstiff = (1.0 - omega.min(STIFFNESS_DAMAGE_CAP)) * e_mod * a / h;
    let k_uu = [[kstiff, -kstiff], [-kstiff, kstiff]];
    let coupling = -domega * e_mod * strain * vol;
    let k_ueps = [b[0] * coupling, b[1] * coupling];
    let k_epsu = [-vol * deq * b[0], -vol * deq * b[1]];

    Ok(ElementKernelOutput {
        r_u,
        r_eps,
        k_uu,
        k_ueps,
        k_epsu,
        k_epseps: vol,
        strain,
        kappa_trial,
        omega,
        loading,
    })
}

/// One side of an interior interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceSide {
    pub geometry: ElementGeometry,
    pub u: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InterfaceKernelOutput {
    /// Contribution to the `eps_bar` residual of the left and right element.
    pub r_eps_pair: [f64; 2],
    /// `k_epsu_blocks[j][k]`: derivative of `r_eps_pair[j]` with respect to
    /// the two displacement DOFs of side `k`.
    pub k_epsu_blocks: [[[f64; 2]; 2]; 2],
    /// `[[eps_eq]]` across the interface.
    pub jump: f64,
}

/// Outward normals of the left and right element at their shared node.
const NORMALS: [f64; 2] = [1.0, -1.0];

/// Penalty term `A_avg c^2 / h_avg [[q]] [[eps_eq]]` on one interface.
pub fn interface_kernel(
    left: InterfaceSide,
    right: InterfaceSide,
    h_avg: f64,
    params: &MaterialParams,
) -> Result<InterfaceKernelOutput> {
    if !(h_avg > 0.0) {
        return Err(Error::Geometry("interface length scale must be positive"));
    }
    let sides = [left, right];
    let c = params.length_scale;
    let area = 0.5 * (left.geometry.area + right.geometry.area);
    let penalty = area * c * c / h_avg;

    let strains = [left.geometry.strain(left.u), right.geometry.strain(right.u)];
    let jump =
        NORMALS[0] * equivalent_strain(strains[0]) + NORMALS[1] * equivalent_strain(strains[1]);

    let mut out = InterfaceKernelOutput {
        jump,
        ..Default::default()
    };
    for j in 0..2 {
        out.r_eps_pair[j] = penalty * NORMALS[j] * jump;
        for k in 0..2 {
            let b = sides[k].geometry.b();
            let s = penalty * NORMALS[j] * NORMALS[k] * equivalent_strain_derivative(strains[k]);
            out.k_epsu_blocks[j][k] = [s * b[0], s * b[1]];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(c: f64) -> MaterialParams {
        MaterialParams::new(2.0e4, 1.0e-4, 0.0125, c).unwrap()
    }

    const UNIT: ElementGeometry = ElementGeometry {
        length: 1.0,
        area: 1.0,
    };

    #[test]
    fn elastic_blocks() {
        let out = element_kernel(
            UNIT,
            ElementState {
                u: [0.0, 5e-5],
                eps_bar: 5e-5,
                kappa_committed: 0.0,
            },
            &params(1.0),
        )
        .unwrap();
        assert_eq!(out.k_uu, [[2e4, -2e4], [-2e4, 2e4]]);
        assert_eq!(out.k_epseps, 1.0);
        assert_eq!(out.k_ueps, [0.0, 0.0]);
        assert_eq!(out.k_epsu, [1.0, -1.0]);
        assert_eq!(out.r_eps, 0.0);
        assert_eq!(out.omega, 0.0);
        assert_relative_eq!(out.r_u[1], 1.0, max_relative = 1e-14);
        assert_relative_eq!(out.r_u[0], -1.0, max_relative = 1e-14);
    }

    #[test]
    fn eps_bar_equal_to_strain_gives_zero_volume_residual() {
        let out = element_kernel(
            UNIT,
            ElementState {
                u: [0.0, 1e-3],
                eps_bar: 1e-3,
                kappa_committed: 0.0,
            },
            &params(1.0),
        )
        .unwrap();
        assert_eq!(out.r_eps, 0.0);
        assert!(out.loading);
        assert!(out.omega > 0.0);
    }

    #[test]
    fn strain_extraction_row() {
        let g = ElementGeometry {
            length: 0.7,
            area: 0.85,
        };
        let st = ElementState {
            u: [0.3, 0.3021],
            eps_bar: 0.0,
            kappa_committed: 0.0,
        };
        let out = element_kernel(g, st, &params(1.0)).unwrap();
        let ku = out.k_epsu[0] * st.u[0] + out.k_epsu[1] * st.u[1];
        assert_relative_eq!(ku, -out.strain * g.volume(), max_relative = 1e-12);
    }

    #[test]
    fn unloading_has_no_coupling() {
        let out = element_kernel(
            UNIT,
            ElementState {
                u: [0.0, 1e-3],
                eps_bar: 1e-3,
                kappa_committed: 2e-3,
            },
            &params(1.0),
        )
        .unwrap();
        assert!(!out.loading);
        assert_eq!(out.k_ueps, [0.0, 0.0]);
        assert_eq!(out.kappa_trial, 2e-3);
    }

    #[test]
    fn full_damage_caps_stiffness_only() {
        let out = element_kernel(
            UNIT,
            ElementState {
                u: [0.0, 0.02],
                eps_bar: 0.02,
                kappa_committed: 0.0,
            },
            &params(1.0),
        )
        .unwrap();
        assert_eq!(out.omega, 1.0);
        assert_eq!(out.r_u, [0.0, 0.0]);
        assert!(out.k_uu[0][0] > 0.0);
        assert_relative_eq!(out.k_uu[0][0], 2e4 * 1e-9, max_relative = 1e-6);
    }

    #[test]
    fn degenerate_element() {
        let g = ElementGeometry {
            length: 0.0,
            area: 1.0,
        };
        let st = ElementState {
            u: [0.0, 0.0],
            eps_bar: 0.0,
            kappa_committed: 0.0,
        };
        assert!(matches!(
            element_kernel(g, st, &params(1.0)),
            Err(Error::Geometry(_))
        ));
    }

    fn side(u0: f64, u1: f64) -> InterfaceSide {
        InterfaceSide {
            geometry: UNIT,
            u: [u0, u1],
        }
    }

    #[test]
    fn interface_zero_jump() {
        let out = interface_kernel(side(0.0, 1e-3), side(1e-3, 2e-3), 1.0, &params(1.0)).unwrap();
        assert_eq!(out.jump, 0.0);
        assert_eq!(out.r_eps_pair, [0.0, 0.0]);
    }

    #[test]
    fn interface_jump_sign() {
        let out = interface_kernel(side(0.0, 2e-4), side(2e-4, 3e-4), 1.0, &params(1.0)).unwrap();
        assert_relative_eq!(out.jump, 1e-4, max_relative = 1e-12);
    }

    #[test]
    fn interface_unit_jump_residual() {
        let out = interface_kernel(side(0.0, 1.0), side(1.0, 1.0), 1.0, &params(1.0)).unwrap();
        assert_eq!(out.jump, 1.0);
        assert_eq!(out.r_eps_pair, [1.0, -1.0]);
        // n_j n_k sign pattern
        assert_eq!(out.k_epsu_blocks[0][0], [-1.0, 1.0]);
        assert_eq!(out.k_epsu_blocks[0][1], [1.0, -1.0]);
        assert_eq!(out.k_epsu_blocks[1][0], [1.0, -1.0]);
        assert_eq!(out.k_epsu_blocks[1][1], [-1.0, 1.0]);
    }

    #[test]
    fn local_model_has_no_interface_contribution() {
        let out = interface_kernel(side(0.0, 0.3), side(0.3, -0.2), 1.0, &params(0.0)).unwrap();
        assert_eq!(out.r_eps_pair, [0.0, 0.0]);
        assert!(out
            .k_epsu_blocks
            .iter()
            .flatten()
            .flatten()
            .all(|&v| v == 0.0));
    }

    mod fd {
        use super::*;
        use proptest::prelude::*;

        fn kernel_vec(g: ElementGeometry, x: [f64; 3], kappa: f64, p: &MaterialParams) -> [f64; 3] {
            let o = element_kernel(
                g,
                ElementState {
                    u: [x[0], x[1]],
                    eps_bar: x[2],
                    kappa_committed: kappa,
                },
                p,
            )
            .unwrap();
            [o.r_u[0], o.r_u[1], o.r_eps]
        }

        proptest! {
            #[test]
            fn element_blocks_match_central_differences(
                h in 0.2f64..2.0,
                a in 0.5f64..1.5,
                strain in 2e-4f64..1e-2,
                over in 1e-5f64..1e-3,
                kfrac in 0.0f64..0.9,
            ) {
                let p = params(1.0);
                let g = ElementGeometry { length: h, area: a };
                let eps_bar = (strain + over).min(0.012);
                let kappa = kfrac * eps_bar;
                let x = [0.1, 0.1 + strain * h, eps_bar];
                let o = element_kernel(g, ElementState { u: [x[0], x[1]], eps_bar: x[2], kappa_committed: kappa }, &p).unwrap();
                prop_assert!(o.loading);
                let k = [
                    [o.k_uu[0][0], o.k_uu[0][1], o.k_ueps[0]],
                    [o.k_uu[1][0], o.k_uu[1][1], o.k_ueps[1]],
                    [o.k_epsu[0], o.k_epsu[1], o.k_epseps],
                ];
                for col in 0..3 {
                    let step = if col == 2 { 1e-7 * eps_bar } else { 1e-7 * strain * h };
                    let mut xp = x; xp[col] += step;
                    let mut xm = x; xm[col] -= step;
                    let rp = kernel_vec(g, xp, kappa, &p);
                    let rm = kernel_vec(g, xm, kappa, &p);
                    for row in 0..3 {
                        let fd = (rp[row] - rm[row]) / (2.0 * step);
                        let scale = k[row][col].abs().max(1e-12);
                        prop_assert!((fd - k[row][col]).abs() / scale < 1e-6,
                            "entry ({},{}) fd={} an={}", row, col, fd, k[row][col]);
                    }
                }
            }

            #[test]
            fn interface_blocks_match_central_differences(
                u in proptest::collection::vec(-1e-2f64..1e-2, 4),
                h1 in 0.2f64..2.0, h2 in 0.2f64..2.0, c in 0.0f64..3.0,
            ) {
                let p = params(c);
                let g1 = ElementGeometry { length: h1, area: 1.0 };
                let g2 = ElementGeometry { length: h2, area: 0.8 };
                let havg = 0.5 * (h1 + h2);
                let eval = |v: &[f64]| {
                    interface_kernel(
                        InterfaceSide { geometry: g1, u: [v[0], v[1]] },
                        InterfaceSide { geometry: g2, u: [v[2], v[3]] },
                        havg, &p).unwrap()
                };
                let o = eval(&u);
                for col in 0..4 {
                    let step = 1e-6;
                    let mut up = u.clone(); up[col] += step;
                    let mut um = u.clone(); um[col] -= step;
                    let (rp, rm) = (eval(&up).r_eps_pair, eval(&um).r_eps_pair);
                    for j in 0..2 {
                        let fd = (rp[j] - rm[j]) / (2.0 * step);
                        let an = o.k_epsu_blocks[j][col / 2][col % 2];
                        prop_assert!((fd - an).abs() <= 1e-6 * an.abs().max(1e-6));
                    }
                }
            }
        }
    }
}
