//! Cylinder ridge: raised target positions on a head surface above a
//! cylinder.
//!
//! The cylinder defines a plane through its axis midpoint whose normal points
//! away from the mean of the head surface. Every selected head vertex is
//! projected onto that plane and lifted along the normal by
//! `kappa * len`, where `kappa` is the distance from the projection to the
//! nearer cylinder end divided by half the cylinder length. Projections at an
//! end get no lift; a projection on the axis midpoint is lifted by the full
//! cylinder length. `kappa` is not clamped, so projections far off the axis
//! can exceed 1.
//!
//! The `radius` of a [`Cylinder`] only matters for selecting vertices
//! ([`select_cylinder_vertices`]); it is unrelated to the axis midpoint used
//! as the plane point.

use serde::{Deserialize, Serialize};

use crate::geom::{point_in_cylinder, project_point_plane, Cylinder, Plane};
use crate::mesh::{mesh_mean, SurfaceMesh};
use crate::{Error, Result, Vec3};

/// One ridge target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RidgeEntry {
    pub index: usize,
    pub target: Vec3,
    pub kappa: f64,
}

/// Output of [`ridge`]: one entry per input index, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeTargets {
    pub plane: Plane,
    pub entries: Vec<RidgeEntry>,
}

impl RidgeTargets {
    pub fn kappa_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.kappa)
    }
}

/// Plane through the cylinder's axis midpoint, normal pointing from the head
/// mean towards that midpoint.
pub fn cylinder_plane(cylinder: &Cylinder, head: &SurfaceMesh) -> Result<Plane> {
    let midpoint = cylinder.axis_midpoint();
    let normal = midpoint - mesh_mean(head)?;
    if normal.norm() <= 1e-9 {
        return Err(Error::DegenerateNormal);
    }
    Plane::new(midpoint, normal)
}

/// Ridge targets for the head vertices in `indices`.
///
/// Cylinders shorter than `l_min` are rejected. An empty index set gives an
/// empty result.
pub fn ridge(indices: &[usize], head: &SurfaceMesh, cylinder: &Cylinder, l_min: f64) -> Result<RidgeTargets> {
    let len = cylinder.length();
    if len < l_min {
        return Err(Error::RejectedCylinder { length: len, l_min });
    }
    let n = head.vertex_count();
    if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange {
            what: "head vertex",
            index: bad,
            len: n,
        });
    }
    let plane = cylinder_plane(cylinder, head)?;
    let normal = plane.normal();
    let (start, end) = (cylinder.start(), cylinder.end());

    let entries = indices
        .iter()
        .map(|&i| {
            let on_plane = project_point_plane(&head.vertices()[i], &plane);
            let kappa = (start - on_plane).norm().min((end - on_plane).norm()) / (len / 2.0);
            RidgeEntry {
                index: i,
                target: on_plane + normal * (kappa * len),
                kappa,
            }
        })
        .collect();
    Ok(RidgeTargets { plane, entries })
}

/// Indices of the head vertices inside the cylinder, ascending.
pub fn select_cylinder_vertices(head: &SurfaceMesh, cylinder: &Cylinder) -> Vec<usize> {
    head.vertices()
        .iter()
        .enumerate()
        .filter(|(_, v)| point_in_cylinder(v, cylinder))
        .map(|(i, _)| i)
        .collect()
}

#[derive(Serialize, Deserialize)]
struct PlaneRecord {
    point: [f64; 3],
    normal: [f64; 3],
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    index: usize,
    target: [f64; 3],
    kappa: f64,
}

/// JSON form: `{plane:{point,normal}, entries:[{index, target:[x,y,z], kappa}]}`.
#[derive(Serialize, Deserialize)]
struct RidgeRecord {
    plane: PlaneRecord,
    entries: Vec<EntryRecord>,
}

impl Serialize for RidgeTargets {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RidgeRecord {
            plane: PlaneRecord {
                point: self.plane.point.into(),
                normal: self.plane.normal().into(),
            },
            entries: self
                .entries
                .iter()
                .map(|e| EntryRecord {
                    index: e.index,
                    target: e.target.into(),
                    kappa: e.kappa,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RidgeTargets {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let record = RidgeRecord::deserialize(deserializer)?;
        let plane =
            Plane::new(record.plane.point.into(), record.plane.normal.into()).map_err(serde::de::Error::custom)?;
        Ok(RidgeTargets {
            plane,
            entries: record
                .entries
                .into_iter()
                .map(|e| RidgeEntry {
                    index: e.index,
                    target: e.target.into(),
                    kappa: e.kappa,
                })
                .collect(),
        })
    }
}
