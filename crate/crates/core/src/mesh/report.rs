use serde::{Deserialize, Serialize};

use super::{is_finite, SurfaceMesh, TetMesh};

/// Summary of a mesh and every invariant violation found in it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshReport {
    pub vertex_count: usize,
    #[serde(rename = "element_count")]
    pub face_or_tet_count: usize,
    pub bbox_diag: f64,
    /// Smallest face area (m²) or tet volume (m³); 0 for meshes without elements.
    #[serde(rename = "min_measure")]
    pub min_element_measure: f64,
    pub defects: Vec<String>,
}

impl MeshReport {
    pub fn is_clean(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn vertex_defects(vertices: &[crate::Vec3], defects: &mut Vec<String>) {
    for (i, v) in vertices.iter().enumerate() {
        if !is_finite(v) {
            defects.push(format!("vertex {i}: non-finite coordinate"));
        }
    }
}

fn index_defects(element: &str, e: usize, indices: &[usize], n: usize, defects: &mut Vec<String>) -> bool {
    let mut ok = true;
    for &i in indices {
        if i >= n {
            defects.push(format!("{element} {e}: index {i} out of range ({n} vertices)"));
            ok = false;
        }
    }
    for (k, &i) in indices.iter().enumerate() {
        if indices[..k].contains(&i) {
            defects.push(format!("{element} {e}: repeated vertex {i}"));
            ok = false;
            break;
        }
    }
    ok
}

pub(super) fn surface_report(mesh: &SurfaceMesh) -> MeshReport {
    let mut defects = Vec::new();
    vertex_defects(mesh.vertices(), &mut defects);
    let n = mesh.vertex_count();
    let mut min_area = f64::INFINITY;
    for (f, face) in mesh.faces().iter().enumerate() {
        if index_defects("face", f, face, n, &mut defects) {
            let area = mesh.face_area(f);
            if area == 0.0 {
                log::warn!("face {f} has zero area");
            }
            min_area = min_area.min(area);
        }
    }
    MeshReport {
        vertex_count: n,
        face_or_tet_count: mesh.face_count(),
        bbox_diag: mesh.bbox_diag(),
        min_element_measure: if min_area.is_finite() { min_area } else { 0.0 },
        defects,
    }
}

pub(super) fn tet_report(mesh: &TetMesh) -> MeshReport {
    let mut defects = Vec::new();
    vertex_defects(mesh.vertices(), &mut defects);
    let n = mesh.vertex_count();
    let mut min_volume = f64::INFINITY;
    for (t, tet) in mesh.tets().iter().enumerate() {
        if index_defects("tet", t, tet, n, &mut defects) {
            let volume = mesh.tet_volume(t);
            if !(volume > 0.0) {
                defects.push(format!("tet {t}: inverted or flat (volume {volume:e})"));
            }
            min_volume = min_volume.min(volume);
        }
    }
    MeshReport {
        vertex_count: n,
        face_or_tet_count: mesh.tet_count(),
        bbox_diag: mesh.bbox_diag(),
        min_element_measure: if min_volume.is_finite() { min_volume } else { 0.0 },
        defects,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Vec3;

    fn tri() -> Vec<Vec3> {
        vec![Vec3::zeros(), Vec3::x(), Vec3::y()]
    }

    #[test]
    fn json_field_names() {
        let m = SurfaceMesh::new(tri(), vec![[0, 1, 2]]).unwrap();
        let value: serde_json::Value = serde_json::from_str(&m.report().to_json()).unwrap();
        let mut keys: Vec<_> = value.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            ["bbox_diag", "defects", "element_count", "min_measure", "vertex_count"]
        );
        assert!((value["min_measure"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn seeded_defects_are_distinct() {
        let out_of_range = SurfaceMesh::new_unchecked(tri(), vec![[0, 1, 9]]).report();
        let repeated = SurfaceMesh::new_unchecked(tri(), vec![[0, 1, 1]]).report();
        let inverted =
            TetMesh::new_unchecked(vec![Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()], vec![[0, 1, 3, 2]]).report();
        let d = [&out_of_range.defects, &repeated.defects, &inverted.defects];
        assert!(d[0][0].contains("out of range"));
        assert!(d[1][0].contains("repeated vertex"));
        assert!(d[2][0].contains("inverted"));
        assert_ne!(d[0][0], d[1][0]);
        assert_ne!(d[1][0], d[2][0]);
    }

    #[test]
    fn zero_area_face_is_not_a_defect() {
        let verts = vec![Vec3::zeros(), Vec3::x(), Vec3::new(2.0, 0.0, 0.0)];
        let report = SurfaceMesh::new_unchecked(verts, vec![[0, 1, 2]]).report();
        assert!(report.is_clean());
        assert_eq!(report.min_element_measure, 0.0);
    }
}
