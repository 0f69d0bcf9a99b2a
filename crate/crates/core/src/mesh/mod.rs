//! Triangle and tetrahedral meshes, their file formats and synthetic fixtures.

mod obj;
mod report;
mod synth;
mod tetgen;

pub use obj::{parse_obj, parse_obj_unchecked, write_obj};
pub use report::MeshReport;
pub use synth::{jitter, synth_ellipsoid, synth_sphere, synth_sphere_tet};
pub use tetgen::{parse_tetgen, parse_tetgen_unchecked, write_tetgen};

use std::collections::HashMap;

use crate::{Error, Result, Vec3};

/// Triangle surface. Coordinates are in meters, face indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    vertices: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
}

impl SurfaceMesh {
    /// Builds a surface, rejecting out-of-range indices, repeated vertices in
    /// a face and non-finite coordinates.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let mesh = Self { vertices, faces };
        let report = mesh.report();
        if report.defects.is_empty() {
            Ok(mesh)
        } else {
            Err(Error::InvalidMesh(report.defects.join("; ")))
        }
    }

    /// Builds a surface without validation. Used to inspect broken input with
    /// [`SurfaceMesh::report`].
    pub fn new_unchecked(vertices: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Self {
        Self { vertices, faces }
    }

    pub fn empty() -> Self {
        Self::new_unchecked(Vec::new(), Vec::new())
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Same connectivity, new vertex positions.
    pub fn with_vertices(&self, vertices: Vec<Vec3>) -> Result<Self> {
        if vertices.len() != self.vertices.len() {
            return Err(Error::InvalidMesh(format!(
                "expected {} vertices, got {}",
                self.vertices.len(),
                vertices.len()
            )));
        }
        if vertices.iter().any(|v| !is_finite(v)) {
            return Err(Error::InvalidMesh("non-finite coordinate".into()));
        }
        Ok(Self {
            vertices,
            faces: self.faces.clone(),
        })
    }

    /// Applies `f` to every vertex.
    pub fn map_vertices(&self, f: impl Fn(&Vec3) -> Vec3) -> Self {
        Self {
            vertices: self.vertices.iter().map(f).collect(),
            faces: self.faces.clone(),
        }
    }

    pub fn triangle(&self, face: usize) -> [Vec3; 3] {
        let [a, b, c] = self.faces[face];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Unnormalized face normal (twice the area).
    pub fn face_normal_raw(&self, face: usize) -> Vec3 {
        let [a, b, c] = self.triangle(face);
        (b - a).cross(&(c - a))
    }

    pub fn face_area(&self, face: usize) -> f64 {
        0.5 * self.face_normal_raw(face).norm()
    }

    /// Area-weighted vertex normals. Isolated vertices get a zero normal.
    pub fn vertex_normals(&self) -> Vec<Vec3> {
        let mut normals = vec![Vec3::zeros(); self.vertices.len()];
        for (f, face) in self.faces.iter().enumerate() {
            let n = self.face_normal_raw(f);
            for &v in face {
                normals[v] += n;
            }
        }
        for n in &mut normals {
            let len = n.norm();
            if len > 0.0 {
                *n /= len;
            }
        }
        normals
    }

    /// Diagonal of the axis-aligned bounding box; 0 for an empty mesh.
    pub fn bbox_diag(&self) -> f64 {
        bbox_diag(&self.vertices)
    }

    pub fn report(&self) -> MeshReport {
        report::surface_report(self)
    }

    /// True when every edge is shared by exactly two faces that traverse it
    /// in opposite directions.
    pub fn is_closed_oriented(&self) -> bool {
        self.count_bad_edges() == 0
    }

    pub(crate) fn count_bad_edges(&self) -> usize {
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for face in &self.faces {
            for k in 0..3 {
                *directed.entry((face[k], face[(k + 1) % 3])).or_default() += 1;
            }
        }
        let mut bad = 0;
        for (&(a, b), &count) in &directed {
            let reverse = directed.get(&(b, a)).copied().unwrap_or(0);
            if count != 1 || reverse != 1 {
                bad += 1;
            }
        }
        bad
    }
}

/// Arithmetic mean of all vertex positions.
pub fn mesh_mean(mesh: &SurfaceMesh) -> Result<Vec3> {
    if mesh.vertices.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let sum = mesh.vertices.iter().fold(Vec3::zeros(), |acc, v| acc + v);
    Ok(sum / mesh.vertices.len() as f64)
}

/// Tetrahedral volume mesh. Every tet has positive signed volume.
#[derive(Debug, Clone, PartialEq)]
pub struct TetMesh {
    vertices: Vec<Vec3>,
    tets: Vec<[usize; 4]>,
}

impl TetMesh {
    /// Builds a tet mesh; fails on bad indices, non-finite coordinates or
    /// non-positive volumes. Use [`TetMesh::oriented`] to fix inverted tets
    /// first.
    pub fn new(vertices: Vec<Vec3>, tets: Vec<[usize; 4]>) -> Result<Self> {
        let mesh = Self { vertices, tets };
        let report = mesh.report();
        if report.defects.is_empty() {
            Ok(mesh)
        } else {
            Err(Error::InvalidMesh(report.defects.join("; ")))
        }
    }

    /// Swaps the last two indices of every negatively oriented tet, then
    /// validates. Tets with (bbox-normalized) volume below 1e-12 are errors.
    pub fn oriented(vertices: Vec<Vec3>, mut tets: Vec<[usize; 4]>) -> Result<Self> {
        let n = vertices.len();
        if let Some(&bad) = tets.iter().flatten().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange {
                what: "node",
                index: bad,
                len: n,
            });
        }
        let diag = bbox_diag(&vertices);
        let scale = if diag > 0.0 { diag.powi(3) } else { 1.0 };
        for (t, tet) in tets.iter_mut().enumerate() {
            let vol = signed_volume(&vertices, tet);
            if (vol / scale).abs() < 1e-12 {
                return Err(Error::DegenerateTet {
                    index: t,
                    volume: vol / scale,
                });
            }
            if vol < 0.0 {
                tet.swap(2, 3);
            }
        }
        Self::new(vertices, tets)
    }

    pub fn new_unchecked(vertices: Vec<Vec3>, tets: Vec<[usize; 4]>) -> Self {
        Self { vertices, tets }
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn tet_count(&self) -> usize {
        self.tets.len()
    }

    pub fn tet_volume(&self, tet: usize) -> f64 {
        signed_volume(&self.vertices, &self.tets[tet])
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.tets.len()).map(|t| self.tet_volume(t)).sum()
    }

    pub fn bbox_diag(&self) -> f64 {
        bbox_diag(&self.vertices)
    }

    pub fn report(&self) -> MeshReport {
        report::tet_report(self)
    }

    pub fn with_vertices(&self, vertices: Vec<Vec3>) -> Result<Self> {
        if vertices.len() != self.vertices.len() {
            return Err(Error::InvalidMesh(format!(
                "expected {} vertices, got {}",
                self.vertices.len(),
                vertices.len()
            )));
        }
        Ok(Self::new_unchecked(vertices, self.tets.clone()))
    }

    /// Boundary triangles (faces owned by exactly one tet), oriented outward.
    pub fn boundary_faces(&self) -> Vec<[usize; 3]> {
        let mut seen: HashMap<[usize; 3], (usize, [usize; 3])> = HashMap::new();
        let mut order = Vec::new();
        for tet in &self.tets {
            let [a, b, c, d] = *tet;
            for face in [[a, c, b], [a, b, d], [a, d, c], [b, c, d]] {
                let mut key = face;
                key.sort_unstable();
                let entry = seen.entry(key).or_insert_with(|| {
                    order.push(key);
                    (0, face)
                });
                entry.0 += 1;
            }
        }
        order
            .into_iter()
            .filter_map(|key| {
                let (count, face) = seen[&key];
                (count == 1).then_some(face)
            })
            .collect()
    }

    /// Boundary surface with compacted vertices, plus the map from surface
    /// vertex index to tet vertex index.
    pub fn boundary_surface(&self) -> (SurfaceMesh, Vec<usize>) {
        let faces = self.boundary_faces();
        let mut to_surface: HashMap<usize, usize> = HashMap::new();
        let mut map = Vec::new();
        let mut compact = Vec::with_capacity(faces.len());
        for face in faces {
            let mut out = [0; 3];
            for (k, &v) in face.iter().enumerate() {
                out[k] = *to_surface.entry(v).or_insert_with(|| {
                    map.push(v);
                    map.len() - 1
                });
            }
            compact.push(out);
        }
        let vertices = map.iter().map(|&v| self.vertices[v]).collect();
        (SurfaceMesh::new_unchecked(vertices, compact), map)
    }
}

pub(crate) fn signed_volume(vertices: &[Vec3], tet: &[usize; 4]) -> f64 {
    let [a, b, c, d] = tet.map(|i| vertices[i]);
    (b - a).dot(&(c - a).cross(&(d - a))) / 6.0
}

pub(crate) fn is_finite(v: &Vec3) -> bool {
    v.iter().all(|c| c.is_finite())
}

pub(crate) fn bbox_diag(vertices: &[Vec3]) -> f64 {
    let Some(first) = vertices.first() else {
        return 0.0;
    };
    let (lo, hi) = vertices
        .iter()
        .fold((*first, *first), |(lo, hi), v| (lo.inf(v), hi.sup(v)));
    (hi - lo).norm()
}
