//! Wavefront OBJ, restricted to `v` and `f` records.

use std::fmt::Write as _;

use super::SurfaceMesh;
use crate::{Error, Result, Vec3};

/// Parses the geometry of an OBJ file.
///
/// Only `v` and `f` records are read. Face corners may carry `/vt/vn`
/// suffixes, which are dropped. Polygons are fan-triangulated from their
/// first corner. Negative (relative) indices are not supported.
pub fn parse_obj(text: &str) -> Result<SurfaceMesh> {
    let (vertices, polygons) = read_records(text)?;
    for (line_no, corners) in &polygons {
        if let Some(&bad) = corners.iter().find(|&&i| i >= vertices.len()) {
            return Err(Error::Parse {
                line: *line_no,
                message: format!("face index {} out of range ({} vertices)", bad + 1, vertices.len()),
            });
        }
    }
    SurfaceMesh::new(vertices, triangulate(polygons))
}

/// Like [`parse_obj`] but only rejects syntax errors. The mesh may hold
/// out-of-range indices or degenerate faces; inspect it with
/// [`SurfaceMesh::report`].
pub fn parse_obj_unchecked(text: &str) -> Result<SurfaceMesh> {
    let (vertices, polygons) = read_records(text)?;
    Ok(SurfaceMesh::new_unchecked(vertices, triangulate(polygons)))
}

type Polygon = (usize, Vec<usize>);

fn triangulate(polygons: Vec<Polygon>) -> Vec<[usize; 3]> {
    let mut faces = Vec::with_capacity(polygons.len());
    for (_, corners) in polygons {
        for k in 1..corners.len() - 1 {
            faces.push([corners[0], corners[k], corners[k + 1]]);
        }
    }
    faces
}

fn read_records(text: &str) -> Result<(Vec<Vec3>, Vec<Polygon>)> {
    let mut vertices = Vec::new();
    let mut polygons: Vec<Polygon> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("v") => {
                let mut xyz = [0.0; 3];
                for c in &mut xyz {
                    let field = fields
                        .next()
                        .ok_or_else(|| parse_err(line_no, "vertex needs 3 coordinates"))?;
                    *c = field
                        .parse::<f64>()
                        .map_err(|_| parse_err(line_no, format!("non-numeric coordinate {field:?}")))?;
                    if !c.is_finite() {
                        return Err(parse_err(line_no, format!("non-finite coordinate {field:?}")));
                    }
                }
                vertices.push(Vec3::from(xyz));
            }
            Some("f") => {
                let mut corners = Vec::new();
                for field in fields {
                    let index = field.split('/').next().unwrap_or("");
                    let index: i64 = index
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("bad face index {field:?}")))?;
                    if index < 0 {
                        return Err(parse_err(line_no, "negative (relative) face indices are unsupported"));
                    }
                    if index == 0 {
                        return Err(parse_err(line_no, "face indices are 1-based"));
                    }
                    corners.push(index as usize - 1);
                }
                if corners.len() < 3 {
                    return Err(parse_err(line_no, "face needs at least 3 vertices"));
                }
                polygons.push((line_no, corners));
            }
            _ => {}
        }
    }

    Ok((vertices, polygons))
}

/// Serializes vertices and faces (1-based) as OBJ text.
pub fn write_obj(mesh: &SurfaceMesh) -> String {
    let mut out = String::new();
    for v in mesh.vertices() {
        // `{}` on f64 prints the shortest representation that round-trips.
        let _ = writeln!(out, "v {} {} {}", v.x, v.y, v.z);
    }
    for [a, b, c] in mesh.faces() {
        let _ = writeln!(out, "f {} {} {}", a + 1, b + 1, c + 1);
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
