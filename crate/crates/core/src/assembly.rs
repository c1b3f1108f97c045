//! Mixed DOF numbering, global assembly and essential boundary conditions.

use alloc::vec;
use alloc::vec::Vec;

use crate::banded::BandMatrix;
use crate::element::{
    element_kernel, interface_kernel, ElementGeometry, ElementKernelOutput, ElementState,
    InterfaceSide,
};
use crate::material::{DamageHistory, MaterialParams};
use crate::mesh::Mesh1D;
use crate::{Error, Result};

/// Interleaved numbering: node `j` owns DOF `2j`, element `e` owns the
/// `eps_bar` DOF `2e + 1` sitting between its two end nodes. The global
/// tangent then has lower and upper bandwidth 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofMap {
    n_nodes: usize,
    n_elements: usize,
}

impl DofMap {
    pub fn new(mesh: &Mesh1D) -> Self {
        DofMap {
            n_nodes: mesh.n_nodes(),
            n_elements: mesh.n_elements(),
        }
    }

    #[inline]
    pub fn displacement_dof(&self, node: usize) -> usize {
        debug_assert!(node < self.n_nodes);
        2 * node
    }

    #[inline]
    pub fn eps_bar_dof(&self, element: usize) -> usize {
        debug_assert!(element < self.n_elements);
        2 * element + 1
    }

    pub fn total_dofs(&self) -> usize {
        self.n_nodes + self.n_elements
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn is_displacement(&self, dof: usize) -> bool {
        dof.is_multiple_of(2)
    }

    pub const BANDWIDTH: usize = 3;

    pub fn zero_tangent(&self) -> BandMatrix {
        BandMatrix::zeros(self.total_dofs(), Self::BANDWIDTH, Self::BANDWIDTH)
    }

    pub fn displacements(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n_nodes)
            .map(|j| x[self.displacement_dof(j)])
            .collect()
    }

    pub fn eps_bar(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n_elements)
            .map(|e| x[self.eps_bar_dof(e)])
            .collect()
    }

    /// Combined unknown vector from nodal displacements and element `eps_bar`.
    pub fn pack(&self, u: &[f64], eps_bar: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.n_nodes {
            return Err(Error::Size {
                what: "nodal displacements",
                expected: self.n_nodes,
                got: u.len(),
            });
        }
        if eps_bar.len() != self.n_elements {
            return Err(Error::Size {
                what: "element eps_bar",
                expected: self.n_elements,
                got: eps_bar.len(),
            });
        }
        let mut x = vec![0.0; self.total_dofs()];
        for (j, &v) in u.iter().enumerate() {
            x[self.displacement_dof(j)] = v;
        }
        for (e, &v) in eps_bar.iter().enumerate() {
            x[self.eps_bar_dof(e)] = v;
        }
        Ok(x)
    }
}

/// Assembled residual and consistent (nonsymmetric) tangent.
#[derive(Debug, Clone)]
pub struct GlobalSystem {
    pub residual: Vec<f64>,
    pub tangent: BandMatrix,
    /// Per-element kernel outputs at the assembled state.
    pub elements: Vec<ElementKernelOutput>,
}

fn geometry(mesh: &Mesh1D, e: usize) -> ElementGeometry {
    ElementGeometry {
        length: mesh.element_length(e),
        area: mesh.elements()[e].area,
    }
}

fn local_u(dofs: &DofMap, mesh: &Mesh1D, x: &[f64], e: usize) -> [f64; 2] {
    let el = mesh.elements()[e];
    [
        x[dofs.displacement_dof(el.left_node)],
        x[dofs.displacement_dof(el.right_node)],
    ]
}

/// Loops over elements, then over interior interfaces, summing residual
/// and tangent contributions.
pub fn assemble(
    mesh: &Mesh1D,
    dofs: &DofMap,
    x: &[f64],
    history: &DamageHistory,
    params: &MaterialParams,
) -> Result<GlobalSystem> {
    let n = dofs.total_dofs();
    if x.len() != n {
        return Err(Error::Size {
            what: "unknown vector",
            expected: n,
            got: x.len(),
        });
    }
    if history.len() != mesh.n_elements() {
        return Err(Error::Size {
            what: "damage history",
            expected: mesh.n_elements(),
            got: history.len(),
        });
    }
    let mut residual = vec![0.0; n];
    let mut tangent = dofs.zero_tangent();
    let mut elements = Vec::with_capacity(mesh.n_elements());

    for (e, el) in mesh.elements().iter().enumerate() {
        let ue = local_u(dofs, mesh, x, e);
        let de = dofs.eps_bar_dof(e);
        let state = ElementState {
            u: ue,
            eps_bar: x[de],
            kappa_committed: history.committed()[e],
        };
        let out = element_kernel(geometry(mesh, e), state, params)?;
        let du = [
            dofs.displacement_dof(el.left_node),
            dofs.displacement_dof(el.right_node),
        ];
        for a in 0..2 {
            residual[du[a]] += out.r_u[a];
            for b in 0..2 {
                tangent.add(du[a], du[b], out.k_uu[a][b]);
            }
            tangent.add(du[a], de, out.k_ueps[a]);
            tangent.add(de, du[a], out.k_epsu[a]);
        }
        residual[de] += out.r_eps;
        tangent.add(de, de, out.k_epseps);
        elements.push(out);
    }

    if params.length_scale > 0.0 {
        for (i, itf) in mesh.interfaces().iter().enumerate() {
            let sides = [itf.left_element, itf.right_element];
            let side = |e: usize| InterfaceSide {
                geometry: geometry(mesh, e),
                u: local_u(dofs, mesh, x, e),
            };
            let h_avg = mesh.interface_length_scale(i)?;
            let out = interface_kernel(side(sides[0]), side(sides[1]), h_avg, params)?;
            for j in 0..2 {
                let row = dofs.eps_bar_dof(sides[j]);
                residual[row] += out.r_eps_pair[j];
                for k in 0..2 {
                    let el = mesh.elements()[sides[k]];
                    let cols = [
                        dofs.displacement_dof(el.left_node),
                        dofs.displacement_dof(el.right_node),
                    ];
                    for a in 0..2 {
                        tangent.add(row, cols[a], out.k_epsu_blocks[j][k][a]);
                    }
                }
            }
        }
    }

    Ok(GlobalSystem {
        residual,
        tangent,
        elements,
    })
}

/// Solves only the `eps_bar` equations for given nodal displacements.
///
/// With element-constant `eps_bar` the `eps_bar`-`eps_bar` block is diagonal,
/// so each element value follows from its own row once the displacement
/// field is fixed.
pub fn nonlocal_strain(mesh: &Mesh1D, u: &[f64], params: &MaterialParams) -> Result<Vec<f64>> {
    let dofs = DofMap::new(mesh);
    let x = dofs.pack(u, &vec![0.0; mesh.n_elements()])?;
    let sys = assemble(
        mesh,
        &dofs,
        &x,
        &DamageHistory::new(mesh.n_elements()),
        params,
    )?;
    Ok((0..mesh.n_elements())
        .map(|e| {
            let d = dofs.eps_bar_dof(e);
            -sys.residual[d] / sys.tangent.get(d, d)
        })
        .collect())
}

/// Prescribed increment on one DOF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prescribed {
    pub dof: usize,
    pub increment: f64,
}

/// Linear system for the Newton increment with constrained rows and
/// columns eliminated.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub matrix: BandMatrix,
    pub rhs: Vec<f64>,
    /// Residual of each constrained row before elimination, in the order of
    /// the `prescribed` slice. For a displacement DOF this is the reaction.
    pub reactions: Vec<f64>,
}

impl ReducedSystem {
    /// Newton increment `dx` with `dx[c]` equal to the prescribed increment
    /// on every constrained DOF.
    pub fn solve(self) -> Result<Vec<f64>> {
        self.matrix.solve(&self.rhs)
    }
}

pub fn apply_dirichlet(system: &GlobalSystem, prescribed: &[Prescribed]) -> Result<ReducedSystem> {
    let n = system.residual.len();
    let mut constrained = vec![false; n];
    for p in prescribed {
        if p.dof >= n {
            return Err(Error::Lookup {
                what: "constrained dof",
                index: p.dof,
                len: n,
            });
        }
        if constrained[p.dof] {
            return Err(Error::Config("dof constrained twice"));
        }
        constrained[p.dof] = true;
    }
    let mut matrix = system.tangent.clone();
    let mut rhs: Vec<f64> = system.residual.iter().map(|r| -r).collect();
    let reactions = prescribed.iter().map(|p| system.residual[p.dof]).collect();
    let (kl, ku) = (matrix.lower_bandwidth(), matrix.upper_bandwidth());
    for p in prescribed {
        let c = p.dof;
        for i in c.saturating_sub(ku)..(c + kl + 1).min(n) {
            if !constrained[i] {
                rhs[i] -= matrix.get(i, c) * p.increment;
            }
            matrix.set(i, c, 0.0);
        }
        for j in matrix.row_span(c) {
            matrix.set(c, j, 0.0);
        }
        matrix.set(c, c, 1.0);
        rhs[c] = p.increment;
    }
    Ok(ReducedSystem {
        matrix,
        rhs,
        reactions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::AreaProfile;
    use approx::assert_relative_eq;

    fn params(c: f64) -> MaterialParams {
        MaterialParams::new(2.0e4, 1.0e-4, 0.0125, c).unwrap()
    }

    fn uniform(n: usize, length: f64) -> Mesh1D {
        Mesh1D::uniform(length, n, AreaProfile::Uniform { area: 1.0 }).unwrap()
    }

    #[test]
    fn dof_counts_and_density() {
        let m = uniform(7, 7.0);
        let d = DofMap::new(&m);
        assert_eq!(d.total_dofs(), 8 + 7);
        let mut all: Vec<usize> = (0..8).map(|j| d.displacement_dof(j)).collect();
        all.extend((0..7).map(|e| d.eps_bar_dof(e)));
        all.sort_unstable();
        assert_eq!(all, (0..15).collect::<Vec<_>>());
    }

    #[test]
    fn two_element_coupling_pattern() {
        let m = uniform(2, 3.0);
        let d = DofMap::new(&m);
        assert_eq!(d.total_dofs(), 5);
        // with h = c the element and interface entries for node 0 cancel, so avoid it
        let x = d.pack(&[0.0, 1e-3, 3e-3], &[0.0, 0.0]).unwrap();
        let sys = assemble(&m, &d, &x, &DamageHistory::new(2), &params(1.0)).unwrap();
        let row = d.eps_bar_dof(0);
        for node in 0..3 {
            assert!(
                sys.tangent.get(row, d.displacement_dof(node)) != 0.0,
                "node {node}"
            );
        }
    }

    #[test]
    fn elastic_local_blocks() {
        let m = uniform(4, 4.0);
        let d = DofMap::new(&m);
        let x = d.pack(&[0.0, 1e-5, 2e-5, 3e-5, 4e-5], &[1e-5; 4]).unwrap();
        let sys = assemble(&m, &d, &x, &DamageHistory::new(4), &params(0.0)).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let expected = match (i as i64 - j as i64).abs() {
                    0 if i == 0 || i == 4 => 2e4,
                    0 => 4e4,
                    1 => -2e4,
                    _ => 0.0,
                };
                assert_eq!(
                    sys.tangent
                        .get(d.displacement_dof(i), d.displacement_dof(j)),
                    expected
                );
            }
        }
        for e in 0..4 {
            for f in 0..4 {
                let v = sys.tangent.get(d.eps_bar_dof(e), d.eps_bar_dof(f));
                assert_eq!(v, if e == f { 1.0 } else { 0.0 });
            }
            assert_eq!(
                sys.tangent.get(d.displacement_dof(e), d.eps_bar_dof(e)),
                0.0
            );
        }
    }

    #[test]
    fn rigid_translation_has_no_equilibrium_residual() {
        let m = Mesh1D::uniform(
            10.0,
            10,
            AreaProfile::LinearTaper {
                end_area: 1.0,
                center_area: 0.8,
            },
        )
        .unwrap();
        let d = DofMap::new(&m);
        let x = d.pack(&[0.37; 11], &[0.0; 10]).unwrap();
        let sys = assemble(&m, &d, &x, &DamageHistory::new(10), &params(1.0)).unwrap();
        for j in 0..11 {
            assert_eq!(sys.residual[d.displacement_dof(j)], 0.0);
        }
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let m = uniform(3, 3.0);
        let d = DofMap::new(&m);
        assert!(matches!(
            assemble(&m, &d, &[0.0; 3], &DamageHistory::new(3), &params(1.0)),
            Err(Error::Size { .. })
        ));
        assert!(d.pack(&[0.0; 3], &[0.0; 3]).is_err());
    }

    #[test]
    fn elastic_bar_reaction() {
        let m = uniform(100, 100.0);
        let d = DofMap::new(&m);
        let p = params(1.0);
        let x = vec![0.0; d.total_dofs()];
        let sys = assemble(&m, &d, &x, &DamageHistory::new(100), &p).unwrap();
        let bc = [
            Prescribed {
                dof: d.displacement_dof(0),
                increment: 0.0,
            },
            Prescribed {
                dof: d.displacement_dof(100),
                increment: 0.01,
            },
        ];
        let dx = apply_dirichlet(&sys, &bc).unwrap().solve().unwrap();
        assert_eq!(dx[d.displacement_dof(0)], 0.0);
        assert_eq!(dx[d.displacement_dof(100)], 0.01);
        let sys2 = assemble(&m, &d, &dx, &DamageHistory::new(100), &p).unwrap();
        let red = apply_dirichlet(&sys2, &bc).unwrap();
        assert_relative_eq!(red.reactions[1], 2.0, max_relative = 1e-10);
        assert_relative_eq!(red.reactions[0], -2.0, max_relative = 1e-10);
    }

    #[test]
    fn zero_increment_at_equilibrium() {
        let m = uniform(5, 5.0);
        let d = DofMap::new(&m);
        let x = vec![0.0; d.total_dofs()];
        let sys = assemble(&m, &d, &x, &DamageHistory::new(5), &params(1.0)).unwrap();
        let bc = [
            Prescribed {
                dof: 0,
                increment: 0.0,
            },
            Prescribed {
                dof: 10,
                increment: 0.0,
            },
        ];
        let dx = apply_dirichlet(&sys, &bc).unwrap().solve().unwrap();
        assert!(dx.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn bad_constraints() {
        let m = uniform(2, 2.0);
        let d = DofMap::new(&m);
        let sys = assemble(&m, &d, &[0.0; 5], &DamageHistory::new(2), &params(1.0)).unwrap();
        assert!(matches!(
            apply_dirichlet(
                &sys,
                &[Prescribed {
                    dof: 5,
                    increment: 0.0
                }]
            ),
            Err(Error::Lookup { .. })
        ));
        assert!(apply_dirichlet(
            &sys,
            &[
                Prescribed {
                    dof: 0,
                    increment: 0.0
                },
                Prescribed {
                    dof: 0,
                    increment: 1.0
                }
            ]
        )
        .is_err());
    }
}
