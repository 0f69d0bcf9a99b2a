//! One-sided contact against a closed surface.
//!
//! Inside/outside is decided with angle-weighted pseudonormals at the
//! closest feature, which is exact for closed, consistently oriented meshes.

use std::collections::HashMap;

use crate::geom::{Feature, SurfaceQuery};
use crate::mesh::SurfaceMesh;
use crate::{Error, Result, Vec3};

/// Closed surface that constrained vertices must stay outside of.
#[derive(Debug, Clone)]
pub struct Obstacle {
    query: SurfaceQuery,
    face_normals: Vec<Vec3>,
    vertex_normals: Vec<Vec3>,
    edge_normals: HashMap<(usize, usize), Vec3>,
}

impl Obstacle {
    pub fn new(surface: SurfaceMesh) -> Result<Self> {
        let bad_edges = surface.count_bad_edges();
        if bad_edges > 0 || surface.face_count() == 0 {
            return Err(Error::OpenSurface { bad_edges });
        }
        let face_normals: Vec<Vec3> = (0..surface.face_count())
            .map(|f| surface.face_normal_raw(f).normalize())
            .collect();
        let mut vertex_normals = vec![Vec3::zeros(); surface.vertex_count()];
        let mut edge_normals: HashMap<(usize, usize), Vec3> = HashMap::new();
        for (f, face) in surface.faces().iter().enumerate() {
            let n = face_normals[f];
            for k in 0..3 {
                let (a, b, c) = (face[k], face[(k + 1) % 3], face[(k + 2) % 3]);
                let p = surface.vertices();
                let angle = (p[b] - p[a]).angle(&(p[c] - p[a]));
                vertex_normals[a] += n * angle;
                *edge_normals.entry((a.min(b), a.max(b))).or_insert_with(Vec3::zeros) += n;
            }
        }
        for n in vertex_normals.iter_mut().chain(edge_normals.values_mut()) {
            *n = n.normalize();
        }
        Ok(Self {
            query: SurfaceQuery::new(surface)?,
            face_normals,
            vertex_normals,
            edge_normals,
        })
    }

    pub fn surface(&self) -> &SurfaceMesh {
        self.query.mesh()
    }

    /// Closest surface point, outward normal there, and signed distance
    /// (negative inside).
    pub fn signed_closest(&self, x: &Vec3) -> (Vec3, Vec3, f64) {
        let hit = self.query.closest(x);
        let face = self.surface().faces()[hit.face];
        let normal = match hit.feature {
            Feature::Face => self.face_normals[hit.face],
            Feature::Vertex(k) => self.vertex_normals[face[k as usize]],
            Feature::Edge(k) => {
                let (a, b) = (face[k as usize], face[(k as usize + 1) % 3]);
                self.edge_normals[&(a.min(b), a.max(b))]
            }
        };
        let sign = if (x - hit.point).dot(&normal) < 0.0 { -1.0 } else { 1.0 };
        (hit.point, normal, sign * hit.distance)
    }

    pub fn is_inside(&self, x: &Vec3) -> bool {
        self.signed_closest(x).2 < 0.0
    }

    /// Target for a point inside the surface or closer than `margin` to it:
    /// the closest surface point moved `margin` outward, along the direction
    /// to the point when it is outside and along the pseudonormal otherwise.
    /// `None` when the point is already clear.
    pub fn project(&self, x: &Vec3, margin: f64) -> Option<Vec3> {
        let (closest, normal, signed) = self.signed_closest(x);
        if signed >= margin {
            return None;
        }
        let outward = if signed > 0.0 { (x - closest) / signed } else { normal };
        Some(closest + outward * margin)
    }
}

/// Push projection of a single point against `forbidden`. Fails when the
/// surface is not closed.
pub fn project_push(x: &Vec3, forbidden: &SurfaceMesh, margin: f64) -> Result<Option<Vec3>> {
    Ok(Obstacle::new(forbidden.clone())?.project(x, margin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::synth_sphere;

    fn sphere() -> SurfaceMesh {
        synth_sphere(4, 1.0).unwrap()
    }

    #[test]
    fn far_point_is_inactive() {
        assert_eq!(project_push(&Vec3::new(0.0, 0.0, 3.0), &sphere(), 0.005).unwrap(), None);
    }

    #[test]
    fn inside_point_is_pushed_out() {
        let obstacle = Obstacle::new(sphere()).unwrap();
        let x = Vec3::new(0.0, 0.0, 0.5);
        assert!(obstacle.is_inside(&x));
        let target = obstacle.project(&x, 0.005).unwrap();
        // The icosphere's faces sit slightly inside the unit sphere.
        assert!((target.normalize() - Vec3::z()).norm() < 0.05);
        assert!((0.995..=1.005 + 1e-12).contains(&target.norm()), "{target:?}");
        let (_, _, signed) = obstacle.signed_closest(&target);
        assert!((signed - 0.005).abs() < 1e-9);
    }

    #[test]
    fn surface_point_moves_by_margin() {
        let s = sphere();
        let obstacle = Obstacle::new(s.clone()).unwrap();
        let [a, b, c] = s.triangle(17);
        let on_face = (a + b + c) / 3.0;
        let target = obstacle.project(&on_face, 0.005).unwrap();
        assert!(((target - on_face).norm() - 0.005).abs() < 1e-12);
        let vertex = s.vertices()[5];
        let target = obstacle.project(&vertex, 0.005).unwrap();
        assert!(((target - vertex).norm() - 0.005).abs() < 1e-12);
    }

    #[test]
    fn open_surface_is_rejected() {
        let open = SurfaceMesh::new(vec![Vec3::zeros(), Vec3::x(), Vec3::y()], vec![[0, 1, 2]]).unwrap();
        assert!(matches!(Obstacle::new(open), Err(Error::OpenSurface { .. })));
    }
}
