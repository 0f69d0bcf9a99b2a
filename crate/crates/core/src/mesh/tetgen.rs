//! TetGen `.node` / `.ele` ASCII files.

use std::fmt::Write as _;

use super::{signed_volume, TetMesh};
use crate::{Error, Result, Vec3};

/// Non-empty, non-comment lines with their 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then(|| (i + 1, line.split_whitespace().collect()))
    })
}

fn field<T: std::str::FromStr>(fields: &[&str], k: usize, line: usize, what: &str) -> Result<T> {
    let raw = fields.get(k).ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    raw.parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad {what} {raw:?}"),
    })
}

/// Parses a TetGen node/ele pair.
///
/// The index base (0 or 1) is taken from the first node record. Inverted
/// tets are reoriented by swapping their last two indices.
pub fn parse_tetgen(node_text: &str, ele_text: &str) -> Result<TetMesh> {
    let (vertices, tets, base) = read_records(node_text, ele_text)?;
    if let Some(&bad) = tets.iter().flatten().find(|&&i| i >= vertices.len()) {
        // Report the reference as written in the file.
        let written = if bad == usize::MAX { 0 } else { bad + base };
        return Err(Error::IndexOutOfRange {
            what: "node",
            index: written,
            len: vertices.len(),
        });
    }
    TetMesh::oriented(vertices, tets)
}

/// Like [`parse_tetgen`] but only rejects syntax errors. In-range tets with
/// negative volume are still reoriented; out-of-range references and flat
/// tets are kept for [`TetMesh::report`] to list.
pub fn parse_tetgen_unchecked(node_text: &str, ele_text: &str) -> Result<TetMesh> {
    let (vertices, mut tets, _) = read_records(node_text, ele_text)?;
    for tet in &mut tets {
        if tet.iter().all(|&i| i < vertices.len()) && signed_volume(&vertices, tet) < 0.0 {
            tet.swap(2, 3);
        }
    }
    Ok(TetMesh::new_unchecked(vertices, tets))
}

/// Vertices, zero-based tets and the file's index base. References below
/// the base map to `usize::MAX`.
fn read_records(node_text: &str, ele_text: &str) -> Result<(Vec<Vec3>, Vec<[usize; 4]>, usize)> {
    let mut nodes = records(node_text);
    let (line, header) = nodes.next().ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing .node header".into(),
    })?;
    let count: usize = field(&header, 0, line, "node count")?;
    let dim: usize = field(&header, 1, line, "dimension")?;
    if dim != 3 {
        return Err(Error::Parse {
            line,
            message: format!("expected dimension 3, got {dim}"),
        });
    }

    let mut base = None;
    let mut vertices = Vec::with_capacity(count);
    for (line, rec) in nodes {
        let index: usize = field(&rec, 0, line, "node index")?;
        let base = *base.get_or_insert(index);
        if base > 1 {
            return Err(Error::Parse {
                line,
                message: format!("first node index must be 0 or 1, got {index}"),
            });
        }
        if index != base + vertices.len() {
            return Err(Error::Parse {
                line,
                message: format!("non-consecutive node index {index}"),
            });
        }
        let mut xyz = [0.0; 3];
        for (k, c) in xyz.iter_mut().enumerate() {
            *c = field(&rec, k + 1, line, "coordinate")?;
        }
        vertices.push(Vec3::from(xyz));
    }
    if vertices.len() != count {
        return Err(Error::Parse {
            line,
            message: format!("header declares {count} nodes, found {}", vertices.len()),
        });
    }
    let base = base.unwrap_or(0);

    let mut eles = records(ele_text);
    let (line, header) = eles.next().ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing .ele header".into(),
    })?;
    let tet_count: usize = field(&header, 0, line, "tet count")?;
    let per_tet: usize = field(&header, 1, line, "nodes per tet")?;
    if per_tet < 4 {
        return Err(Error::Parse {
            line,
            message: format!("expected at least 4 nodes per tet, got {per_tet}"),
        });
    }
    let mut tets = Vec::with_capacity(tet_count);
    for (line, rec) in eles {
        let mut tet = [0usize; 4];
        for (k, slot) in tet.iter_mut().enumerate() {
            let raw: usize = field(&rec, k + 1, line, "node reference")?;
            *slot = raw.checked_sub(base).unwrap_or(usize::MAX);
        }
        tets.push(tet);
    }
    if tets.len() != tet_count {
        return Err(Error::Parse {
            line,
            message: format!("header declares {tet_count} tets, found {}", tets.len()),
        });
    }
    Ok((vertices, tets, base))
}

/// Writes a TetGen node/ele pair with 1-based indices.
pub fn write_tetgen(mesh: &TetMesh) -> (String, String) {
    let mut node = String::new();
    let _ = writeln!(node, "{} 3 0 0", mesh.vertex_count());
    for (i, v) in mesh.vertices().iter().enumerate() {
        let _ = writeln!(node, "{} {} {} {}", i + 1, v.x, v.y, v.z);
    }
    let mut ele = String::new();
    let _ = writeln!(ele, "{} 4 0", mesh.tet_count());
    for (t, [a, b, c, d]) in mesh.tets().iter().enumerate() {
        let _ = writeln!(ele, "{} {} {} {} {}", t + 1, a + 1, b + 1, c + 1, d + 1);
    }
    (node, ele)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NODES: &str = "4 3 0 0\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n";

    #[test]
    fn canonical_tet() {
        let m = parse_tetgen(NODES, "1 4 0\n1 1 2 3 4\n").unwrap();
        assert_eq!(m.tet_count(), 1);
        assert!((m.tet_volume(0) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn inverted_tet_is_reoriented() {
        let m = parse_tetgen(NODES, "1 4 0\n1 1 2 4 3\n").unwrap();
        assert_eq!(m.tets(), &[[0, 1, 2, 3]]);
        assert!((m.tet_volume(0) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn zero_based_files() {
        let nodes = "4 3 0 0\n0 0 0 0\n1 1 0 0\n2 0 1 0\n3 0 0 1\n";
        let m = parse_tetgen(nodes, "1 4 0\n0 0 1 2 3\n").unwrap();
        assert_eq!(m.tets(), &[[0, 1, 2, 3]]);
    }

    #[test]
    fn out_of_range_node() {
        let err = parse_tetgen(NODES, "1 4 0\n1 1 2 3 7\n").unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { index: 7, len: 4, .. }));
    }

    #[test]
    fn count_mismatch() {
        assert!(parse_tetgen("5 3 0 0\n1 0 0 0\n", "0 4 0\n").is_err());
        assert!(parse_tetgen(NODES, "2 4 0\n1 1 2 3 4\n").is_err());
    }

    #[test]
    fn flat_tet_is_rejected() {
        let nodes = "4 3 0 0\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 1 1 0\n";
        assert!(matches!(
            parse_tetgen(nodes, "1 4 0\n1 1 2 3 4\n"),
            Err(Error::DegenerateTet { .. })
        ));
    }

    #[test]
    fn write_then_parse() {
        let m = parse_tetgen(NODES, "1 4 0\n1 1 2 3 4\n").unwrap();
        let (node, ele) = write_tetgen(&m);
        assert_eq!(parse_tetgen(&node, &ele).unwrap(), m);
    }
}
