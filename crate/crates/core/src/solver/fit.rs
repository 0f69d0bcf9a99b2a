//! Outer fitting loop: correspondences, assembly, projective-dynamics solve.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pd::{pd_solve, FitState};
use super::system::{assemble, constraint_energy, project_all, System};
use super::SolverParams;
use crate::constraints::{
    build_correspondences, Component, Constraint, CorrespondenceGate, Obstacle, Positional, Push, TetStrain, Weights,
};
use crate::geom::SurfaceQuery;
use crate::mesh::{SurfaceMesh, TetMesh};
use crate::ridge::RidgeTargets;
use crate::{Error, Result, Vec3};

/// Template to be fitted: tet components plus the boundary surface that is
/// matched against the target.
#[derive(Debug, Clone)]
pub struct Template {
    components: Vec<(Component, TetMesh)>,
    boundary: SurfaceMesh,
    /// Boundary vertex -> global (concatenated) tet vertex.
    boundary_map: Vec<usize>,
    /// Fixed attractions on global vertices.
    pub pulls: Vec<(usize, Vec3)>,
    /// Surface the boundary must stay outside of.
    pub obstacle: Option<Arc<Obstacle>>,
}

impl Template {
    /// Template whose boundary is the outer surface of its first component.
    pub fn new(components: Vec<(Component, TetMesh)>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidMesh("template has no tet components".into()))?;
        let (boundary, boundary_map) = first.1.boundary_surface();
        Self::with_boundary(components, boundary, boundary_map)
    }

    /// Template with an explicit boundary surface and vertex map.
    pub fn with_boundary(
        components: Vec<(Component, TetMesh)>,
        boundary: SurfaceMesh,
        boundary_map: Vec<usize>,
    ) -> Result<Self> {
        let total: usize = components.iter().map(|(_, m)| m.vertex_count()).sum();
        if boundary_map.len() != boundary.vertex_count() {
            return Err(Error::InvalidMesh(format!(
                "boundary map has {} entries for {} boundary vertices",
                boundary_map.len(),
                boundary.vertex_count()
            )));
        }
        if let Some(&bad) = boundary_map.iter().find(|&&v| v >= total) {
            return Err(Error::IndexOutOfRange {
                what: "boundary map",
                index: bad,
                len: total,
            });
        }
        Ok(Self {
            components,
            boundary,
            boundary_map,
            pulls: Vec::new(),
            obstacle: None,
        })
    }

    pub fn components(&self) -> &[(Component, TetMesh)] {
        &self.components
    }

    pub fn boundary(&self) -> &SurfaceMesh {
        &self.boundary
    }

    pub fn boundary_map(&self) -> &[usize] {
        &self.boundary_map
    }

    pub fn rest_positions(&self) -> Vec<Vec3> {
        self.components
            .iter()
            .flat_map(|(_, m)| m.vertices().iter().copied())
            .collect()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.components.len());
        let mut total = 0;
        for (_, m) in &self.components {
            offsets.push(total);
            total += m.vertex_count();
        }
        offsets
    }

    /// One strain constraint per tet, weighted by its component.
    pub fn strain_constraints(&self, weights: &Weights, alpha: f64) -> Result<Vec<Constraint>> {
        let rest = self.rest_positions();
        let mut out = Vec::new();
        for ((component, mesh), base) in self.components.iter().zip(self.offsets()) {
            for tet in mesh.tets() {
                let indices = tet.map(|v| v + base);
                out.push(Constraint::TetStrain(TetStrain::new(
                    *component,
                    indices,
                    &rest,
                    alpha,
                    weights.strain(*component),
                )?));
            }
        }
        Ok(out)
    }

    pub fn boundary_positions(&self, q: &[Vec3]) -> Vec<Vec3> {
        self.boundary_map.iter().map(|&v| q[v]).collect()
    }

    /// Fitted tet components for positions `q`.
    pub fn fitted_components(&self, q: &[Vec3]) -> Result<Vec<(Component, TetMesh)>> {
        self.components
            .iter()
            .zip(self.offsets())
            .map(|((c, m), base)| Ok((*c, m.with_vertices(q[base..base + m.vertex_count()].to_vec())?)))
            .collect()
    }

    pub fn fitted_boundary(&self, q: &[Vec3]) -> Result<SurfaceMesh> {
        self.boundary.with_vertices(self.boundary_positions(q))
    }
}

/// Per-outer-iteration record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterReport {
    pub outer_iter: usize,
    pub energy: f64,
    pub n_correspondences: usize,
    pub mean_surface_dist: f64,
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub state: FitState,
    pub reports: Vec<OuterReport>,
    pub converged: bool,
    pub initial_energy: f64,
    pub initial_mean_surface_dist: f64,
    /// Number of global factorizations performed.
    pub factorizations: usize,
}

#[derive(Serialize)]
struct ReportRecord<'a> {
    converged: bool,
    initial_energy: f64,
    initial_mean_surface_dist: f64,
    iterations: &'a [OuterReport],
}

impl FitResult {
    pub fn final_mean_surface_dist(&self) -> f64 {
        self.reports
            .last()
            .map_or(self.initial_mean_surface_dist, |r| r.mean_surface_dist)
    }

    /// `{converged, initial_energy, initial_mean_surface_dist, iterations: [...]}`.
    pub fn report_json(&self) -> String {
        serde_json::to_string_pretty(&ReportRecord {
            converged: self.converged,
            initial_energy: self.initial_energy,
            initial_mean_surface_dist: self.initial_mean_surface_dist,
            iterations: &self.reports,
        })
        .expect("report serializes")
    }
}

fn mean_surface_dist(points: &[Vec3], target: &SurfaceQuery) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let d: Vec<f64> = points.par_iter().map(|p| target.closest(p).distance).collect();
    d.iter().sum::<f64>() / points.len() as f64
}

/// Fits `template` to `target`.
///
/// Each outer iteration rebuilds boundary correspondences, reassembles the
/// global system when the set of corresponded vertices changed, runs one
/// [`pd_solve`] and evaluates the total constraint energy `E_k`. Fitting
/// stops when `|E_k - E_{k-1}| / max(E_{k-1}, ε) < delta_eps`, or after
/// `max_outer_iterations`. Ridge entries index boundary vertices and become
/// target constraints.
pub fn fit(
    template: &Template,
    target: &SurfaceMesh,
    ridge_targets: Option<&RidgeTargets>,
    weights: &Weights,
    params: &SolverParams,
) -> Result<FitResult> {
    weights.validate()?;
    params.validate()?;
    let target = SurfaceQuery::new(target.clone())?;
    let gate = CorrespondenceGate {
        max_dist: params.max_dist(),
        max_angle_deg: params.corr_max_angle_deg,
    };

    let mut fixed = template.strain_constraints(weights, params.alpha)?;
    if let Some(ridge) = ridge_targets {
        for e in &ridge.entries {
            let vertex = *template.boundary_map.get(e.index).ok_or(Error::IndexOutOfRange {
                what: "ridge target",
                index: e.index,
                len: template.boundary_map.len(),
            })?;
            fixed.push(Constraint::Target(Positional {
                vertex,
                target: e.target,
                weight: weights.w_tar,
            }));
        }
    }
    for &(vertex, target) in &template.pulls {
        fixed.push(Constraint::Pull(Positional {
            vertex,
            target,
            weight: weights.w_pull,
        }));
    }
    if let Some(obstacle) = &template.obstacle {
        for &vertex in &template.boundary_map {
            fixed.push(Constraint::Push(Push {
                vertex,
                obstacle: Arc::clone(obstacle),
                margin: params.contact_margin,
                weight: weights.w_push,
            }));
        }
    }

    let meshes: Vec<&TetMesh> = template.components.iter().map(|(_, m)| m).collect();
    let correspondences = |q: &[Vec3]| -> Result<Vec<Constraint>> {
        let positions = template.boundary_positions(q);
        let normals = template.boundary.with_vertices(positions.clone())?.vertex_normals();
        Ok(
            build_correspondences(&positions, &normals, &target, gate, weights.w_corr)
                .into_iter()
                .map(|c| c.map_indices(|v| template.boundary_map[v]))
                .collect(),
        )
    };
    let with = |corr: &[Constraint]| -> Vec<Constraint> { fixed.iter().chain(corr).cloned().collect() };

    let mut state = FitState::new(template.rest_positions());
    let mut corr = correspondences(&state.q)?;
    let constraints = with(&corr);
    let initial_energy = constraint_energy(&constraints, &state.q, &project_all(&constraints, &state.q));
    let initial_mean_surface_dist = mean_surface_dist(&template.boundary_positions(&state.q), &target);

    let mut previous_energy = initial_energy;
    let mut system: Option<(Vec<usize>, System)> = None;
    let mut factorizations = 0;
    let mut empty_streak = 0;
    let mut reports = Vec::new();
    let mut converged = false;

    for outer_iter in 1..=params.max_outer_iterations {
        if outer_iter > 1 {
            corr = correspondences(&state.q)?;
        }
        if corr.is_empty() {
            empty_streak += 1;
            if empty_streak >= 3 {
                return Err(Error::NoCorrespondences {
                    iterations: empty_streak,
                });
            }
        } else {
            empty_streak = 0;
        }

        let constraints = with(&corr);
        let signature: Vec<usize> = corr.iter().map(|c| c.indices()[0]).collect();
        if system.as_ref().is_none_or(|(s, _)| *s != signature) {
            system = Some((signature, assemble(&meshes, &constraints, params)?));
            factorizations += 1;
        }
        let (_, sys) = system.as_ref().expect("assembled above");

        state = pd_solve(&state, sys, &constraints, params)?;
        let energy = constraint_energy(&constraints, &state.q, &project_all(&constraints, &state.q));
        let report = OuterReport {
            outer_iter,
            energy,
            n_correspondences: corr.len(),
            mean_surface_dist: mean_surface_dist(&template.boundary_positions(&state.q), &target),
        };
        log::info!(
            "outer {outer_iter}: energy {energy:.6e}, {} correspondences, mean distance {:.6e}",
            report.n_correspondences,
            report.mean_surface_dist
        );
        reports.push(report);

        let change = (energy - previous_energy).abs() / previous_energy.max(f64::EPSILON);
        if change < params.delta_eps && !corr.is_empty() {
            converged = true;
            break;
        }
        previous_energy = energy;
    }

    Ok(FitResult {
        state,
        reports,
        converged,
        initial_energy,
        initial_mean_surface_dist,
        factorizations,
    })
}
