//! Global step of projective dynamics.
//!
//! The global objective is
//!
//! ```text
//! 1/(2 s²) Σ_v m_v |q_v - y_v|²  +  Σ_i w_i/2 |A_i q - p_i|²
//! ```
//!
//! with `y` the inertial anchor and `p_i` fixed projections. Its Hessian is
//! the same for x, y and z, so one factorization serves all three
//! coordinates.

use rayon::prelude::*;

use super::sparse::{EnvelopeCholesky, SparseSym};
use super::SolverParams;
use crate::constraints::{Constraint, Projection};
use crate::mesh::TetMesh;
use crate::{Error, Result, Vec3};

/// Prefactorized global system.
#[derive(Debug, Clone)]
pub struct System {
    matrix: SparseSym,
    factor: EnvelopeCholesky,
    masses: Vec<f64>,
    inertia: f64,
}

/// Lumped masses of the concatenated tet meshes: a quarter of each incident
/// tet's volume times density.
pub fn lumped_masses(tet_meshes: &[&TetMesh], density: f64) -> Vec<f64> {
    let mut masses = Vec::new();
    for mesh in tet_meshes {
        let base = masses.len();
        masses.resize(base + mesh.vertex_count(), 0.0);
        for (t, tet) in mesh.tets().iter().enumerate() {
            let share = density * mesh.tet_volume(t) / 4.0;
            for &v in tet {
                masses[base + v] += share;
            }
        }
    }
    masses
}

/// Builds and factorizes `M/s² + Σ_i w_i A_iᵀ A_i`.
///
/// Vertices are numbered by concatenating the meshes in order.
pub fn assemble(tet_meshes: &[&TetMesh], constraints: &[Constraint], params: &SolverParams) -> Result<System> {
    params.validate()?;
    let masses = lumped_masses(tet_meshes, params.density);
    if let Some(vertex) = masses.iter().position(|&m| !(m > 0.0)) {
        return Err(Error::ZeroMass { vertex });
    }
    let n = masses.len();
    let inertia = 1.0 / (params.timestep * params.timestep);

    let mut matrix = SparseSym::new(n);
    for (v, m) in masses.iter().enumerate() {
        matrix.add(v, v, m * inertia);
    }
    for c in constraints {
        if let Some(&bad) = c.indices().iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange {
                what: "constraint vertex",
                index: bad,
                len: n,
            });
        }
        match c {
            Constraint::TetStrain(t) => {
                let g = t.gradient_operator();
                let k = t.stiffness();
                for a in 0..4 {
                    for b in 0..=a {
                        matrix.add(t.indices[a], t.indices[b], k * g[a].dot(&g[b]));
                    }
                }
            }
            _ => {
                let v = c.indices()[0];
                matrix.add(v, v, c.weight());
            }
        }
    }
    let factor = EnvelopeCholesky::factor(&matrix)?;
    Ok(System {
        matrix,
        factor,
        masses,
        inertia,
    })
}

impl System {
    pub fn vertex_count(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Inertia coefficient `1/s²`.
    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    pub fn matrix(&self) -> &SparseSym {
        &self.matrix
    }

    /// Right-hand side per coordinate: `M/s² y + Σ_i w_i A_iᵀ p_i`.
    pub fn rhs(&self, anchor: &[Vec3], constraints: &[Constraint], projections: &[Projection]) -> [Vec<f64>; 3] {
        let mut b: [Vec<f64>; 3] = std::array::from_fn(|c| {
            anchor
                .iter()
                .zip(&self.masses)
                .map(|(y, m)| m * self.inertia * y[c])
                .collect()
        });
        for (c, p) in constraints.iter().zip(projections) {
            match (c, p) {
                (Constraint::TetStrain(t), Projection::Gradient(target)) => {
                    let g = t.gradient_operator();
                    let k = t.stiffness();
                    for (j, &v) in t.indices.iter().enumerate() {
                        // Row `coord` of the target gradient dotted with g_j.
                        let contrib = target * g[j];
                        for (coord, bc) in b.iter_mut().enumerate() {
                            bc[v] += k * contrib[coord];
                        }
                    }
                }
                (_, Projection::Point(point)) => {
                    let v = c.indices()[0];
                    for (coord, bc) in b.iter_mut().enumerate() {
                        bc[v] += c.weight() * point[coord];
                    }
                }
                _ => panic!("projection does not match constraint kind"),
            }
        }
        b
    }

    /// Minimizer of the global objective for fixed projections.
    pub fn solve(&self, anchor: &[Vec3], constraints: &[Constraint], projections: &[Projection]) -> Vec<Vec3> {
        let rhs = self.rhs(anchor, constraints, projections);
        let solved: Vec<Vec<f64>> = rhs.par_iter().map(|b| self.factor.solve(b)).collect();
        (0..self.vertex_count())
            .map(|v| Vec3::new(solved[0][v], solved[1][v], solved[2][v]))
            .collect()
    }

    /// Gradient of the global objective, computed from the assembled matrix.
    pub fn gradient(
        &self,
        q: &[Vec3],
        anchor: &[Vec3],
        constraints: &[Constraint],
        projections: &[Projection],
    ) -> Vec<Vec3> {
        let rhs = self.rhs(anchor, constraints, projections);
        let lq: Vec<Vec<f64>> = (0..3)
            .map(|c| self.matrix.mul(&q.iter().map(|x| x[c]).collect::<Vec<_>>()))
            .collect();
        (0..q.len())
            .map(|v| Vec3::new(lq[0][v] - rhs[0][v], lq[1][v] - rhs[1][v], lq[2][v] - rhs[2][v]))
            .collect()
    }

    /// Inertia term `1/(2 s²) Σ m_v |q_v - y_v|²`.
    pub fn momentum_energy(&self, q: &[Vec3], anchor: &[Vec3]) -> f64 {
        0.5 * self.inertia
            * q.iter()
                .zip(anchor)
                .zip(&self.masses)
                .map(|((x, y), m)| m * (x - y).norm_squared())
                .sum::<f64>()
    }
}

/// Projections of every constraint at `q`, computed in parallel.
pub fn project_all(constraints: &[Constraint], q: &[Vec3]) -> Vec<Projection> {
    constraints.par_iter().map(|c| c.project(q)).collect()
}

/// `Σ_i w_i/2 |A_i q - p_i|²`, summed in constraint order.
pub fn constraint_energy(constraints: &[Constraint], q: &[Vec3], projections: &[Projection]) -> f64 {
    let terms: Vec<f64> = constraints
        .par_iter()
        .zip(projections.par_iter())
        .map(|(c, p)| c.energy_with(q, p))
        .collect();
    terms.iter().sum()
}
