//! Synthetic fixtures: icospheres, ellipsoids and tetrahedralized balls.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{signed_volume, SurfaceMesh, TetMesh};
use crate::{Error, Result, Vec3};

/// Icosphere centred at the origin. `subdivisions = 0` is the icosahedron.
pub fn synth_sphere(subdivisions: u32, radius: f64) -> Result<SurfaceMesh> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParams(format!("radius must be positive, got {radius}")));
    }
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec3> = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..subdivisions {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Vec3>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                vertices.push(((vertices[a] + vertices[b]) * 0.5).normalize());
                vertices.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }

    SurfaceMesh::new(vertices.into_iter().map(|v| v * radius).collect(), faces)
}

/// Icosphere scaled per axis into an ellipsoid with the given semi-axes.
pub fn synth_ellipsoid(subdivisions: u32, semi_axes: Vec3) -> Result<SurfaceMesh> {
    if semi_axes.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::InvalidParams(format!(
            "semi-axes must be positive, got {semi_axes:?}"
        )));
    }
    Ok(synth_sphere(subdivisions, 1.0)?.map_vertices(|v| v.component_mul(&semi_axes)))
}

/// Tetrahedralized ball of the given radius centred at the origin.
///
/// A regular grid with `resolution` cells across the diameter is clipped to
/// the cells whose centre lies inside the sphere; each cell is split into six
/// tets sharing its main diagonal. Boundary vertices are then moved radially
/// onto the sphere, backing off wherever a full snap would flatten a tet.
pub fn synth_sphere_tet(resolution: usize, radius: f64) -> Result<TetMesh> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParams(format!("radius must be positive, got {radius}")));
    }
    let n = resolution;
    let h = 2.0 * radius / n as f64;
    let node = |i: usize, j: usize, k: usize| i + (n + 1) * (j + (n + 1) * k);
    let coord = |i: usize| -radius + i as f64 * h;

    let mut grid_tets = Vec::new();
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let center = Vec3::new(coord(i), coord(j), coord(k)) + Vec3::repeat(0.5 * h);
                if center.norm() > radius {
                    continue;
                }
                let corner = |d: [usize; 3]| node(i + d[0], j + d[1], k + d[2]);
                for axes in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                    let mut step = [0usize; 3];
                    let mut path = [corner(step); 4];
                    for (s, &axis) in axes.iter().enumerate() {
                        step[axis] = 1;
                        path[s + 1] = corner(step);
                    }
                    grid_tets.push(path);
                }
            }
        }
    }
    if grid_tets.is_empty() {
        return Err(Error::InvalidParams(format!(
            "resolution {resolution} produces no tets"
        )));
    }

    // Compact the used grid nodes.
    let mut remap: HashMap<usize, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let tets: Vec<[usize; 4]> = grid_tets
        .iter()
        .map(|tet| {
            tet.map(|g| {
                *remap.entry(g).or_insert_with(|| {
                    let (i, rest) = (g % (n + 1), g / (n + 1));
                    let (j, k) = (rest % (n + 1), rest / (n + 1));
                    vertices.push(Vec3::new(coord(i), coord(j), coord(k)));
                    vertices.len() - 1
                })
            })
        })
        .collect();
    let mesh = TetMesh::oriented(vertices, tets)?;

    let rest = mesh.vertices().to_vec();
    let rest_volumes: Vec<f64> = (0..mesh.tet_count()).map(|t| mesh.tet_volume(t)).collect();
    let mut on_boundary = vec![false; rest.len()];
    for face in mesh.boundary_faces() {
        for v in face {
            on_boundary[v] = true;
        }
    }
    let snapped = |v: usize, amount: f64| -> Vec3 {
        let p = rest[v];
        if amount == 0.0 {
            return p;
        }
        let target = p * (radius / p.norm());
        p + (target - p) * amount
    };
    let mut amount: Vec<f64> = on_boundary.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let mut positions: Vec<Vec3> = (0..rest.len()).map(|v| snapped(v, amount[v])).collect();
    for _ in 0..32 {
        let mut changed = false;
        for (t, tet) in mesh.tets().iter().enumerate() {
            if signed_volume(&positions, tet) >= 0.05 * rest_volumes[t] {
                continue;
            }
            for &v in tet {
                if amount[v] > 0.0 {
                    amount[v] *= 0.5;
                    positions[v] = snapped(v, amount[v]);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    TetMesh::new(positions, mesh.tets().to_vec())
}

/// Adds uniform noise in `[-amplitude, amplitude]` to every coordinate.
/// Deterministic for a given seed.
pub fn jitter(mesh: &SurfaceMesh, amplitude: f64, seed: u64) -> SurfaceMesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noisy = mesh
        .vertices()
        .iter()
        .map(|v| {
            v + Vec3::from_fn(|_, _| {
                if amplitude > 0.0 {
                    rng.random_range(-amplitude..=amplitude)
                } else {
                    0.0
                }
            })
        })
        .collect();
    SurfaceMesh::new_unchecked(noisy, mesh.faces().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosahedron_counts() {
        let m = synth_sphere(0, 1.0).unwrap();
        assert_eq!((m.vertex_count(), m.face_count()), (12, 20));
        assert!(m.is_closed_oriented());
    }

    #[test]
    fn icosphere_is_outward_and_on_sphere() {
        let m = synth_sphere(3, 2.0).unwrap();
        assert_eq!((m.vertex_count(), m.face_count()), (642, 1280));
        assert!(m.is_closed_oriented());
        for v in m.vertices() {
            assert!((v.norm() - 2.0).abs() < 1e-12);
        }
        for f in 0..m.face_count() {
            let [a, ..] = m.triangle(f);
            assert!(m.face_normal_raw(f).dot(&a) > 0.0);
        }
    }

    #[test]
    fn ball_volume_close_to_sphere() {
        let ball = synth_sphere_tet(16, 1.0).unwrap();
        assert!(ball.report().is_clean());
        let exact = 4.0 / 3.0 * std::f64::consts::PI;
        let rel = (ball.total_volume() - exact).abs() / exact;
        assert!(rel < 0.05, "relative volume error {rel}");
    }

    #[test]
    fn ball_boundary_is_closed() {
        let ball = synth_sphere_tet(6, 0.1).unwrap();
        let (surface, _) = ball.boundary_surface();
        assert!(surface.is_closed_oriented());
    }

    #[test]
    fn zero_resolution_fails() {
        assert!(synth_sphere_tet(0, 1.0).is_err());
    }

    #[test]
    fn jitter_is_seeded() {
        let m = synth_sphere(1, 1.0).unwrap();
        assert_eq!(jitter(&m, 0.01, 3), jitter(&m, 0.01, 3));
        assert_ne!(jitter(&m, 0.01, 3), jitter(&m, 0.01, 4));
        assert_eq!(jitter(&m, 0.0, 3), m);
    }
}
