//! Geometric primitives and queries.

mod bvh;
mod primitives;
mod rotation;

pub use bvh::{closest_point_on_surface, closest_point_on_triangle, ClosestHit, Feature, SurfaceQuery};
pub use primitives::{point_in_cylinder, project_point_plane, Cylinder, Plane};
pub use rotation::{best_fit_rotation, signed_svd, SignedSvd, SVD_TOLERANCE};
