use rayon::prelude::*;

use super::{Constraint, Positional};
use crate::geom::SurfaceQuery;
use crate::Vec3;

/// Distance and normal-angle gates for accepting a closest-point pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrespondenceGate {
    pub max_dist: f64,
    pub max_angle_deg: f64,
}

/// Closest-point correspondences from each source vertex to the target.
///
/// A pair is kept when its distance is at most `max_dist` and the angle
/// between the source vertex normal and the target face normal is at most
/// `max_angle_deg`. Constraint vertex indices are source indices.
pub fn build_correspondences(
    source: &[Vec3],
    normals: &[Vec3],
    target: &SurfaceQuery,
    gate: CorrespondenceGate,
    weight: f64,
) -> Vec<Constraint> {
    let cos_max = gate.max_angle_deg.to_radians().cos();
    let mesh = target.mesh();
    source
        .par_iter()
        .zip(normals.par_iter())
        .enumerate()
        .filter_map(|(vertex, (x, n))| {
            let hit = target.closest(x);
            if hit.distance > gate.max_dist {
                return None;
            }
            let face_normal = mesh.face_normal_raw(hit.face);
            let denom = face_normal.norm() * n.norm();
            if !(denom > 0.0) || face_normal.dot(n) / denom < cos_max - 1e-12 {
                return None;
            }
            Some(Constraint::Correspondence(Positional {
                vertex,
                target: hit.point,
                weight,
            }))
        })
        .collect()
}
