//! Template fitting of tetrahedral meshes to surface targets.
//!
//! A template made of one or more tet meshes is deformed towards a target
//! triangle surface with a projective-dynamics solver. Each outer iteration
//! rebuilds closest-point correspondences between the template boundary and
//! the target, then runs a fixed number of local/global iterations over the
//! weighted constraint set (targets, strain limits, push, pull and
//! correspondences).
//!
//! The [`ridge`] module generates raised target positions on a head surface
//! above a cylinder; those targets enter the fit as target constraints.
//!
//! ```
//! use tetfit_core::{ridge, Cylinder, SurfaceMesh, Vec3};
//!
//! let head = SurfaceMesh::new(
//!     vec![Vec3::new(0.0, 0.0, 0.3), Vec3::new(0.0, 1.0, -3.3), Vec3::new(0.0, -1.0, -3.0)],
//!     vec![[0, 1, 2]],
//! )
//! .unwrap();
//! let cylinder = Cylinder::new(Vec3::new(-1.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), 0.25).unwrap();
//! let targets = ridge::ridge(&[0], &head, &cylinder, 0.025).unwrap();
//! assert!((targets.entries[0].target - Vec3::new(0.0, 0.0, 2.0)).norm() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constraints;
pub mod error;
pub mod geom;
pub mod mesh;
pub mod ridge;
pub mod solver;

pub use constraints::{Component, Constraint, ConstraintKind, Weights};
pub use error::{Error, Result};
pub use geom::{Cylinder, Plane};
pub use mesh::{MeshReport, SurfaceMesh, TetMesh};
pub use ridge::RidgeTargets;
pub use solver::{FitResult, FitState, SolverParams, System, Template};

/// 3D point or direction, in meters.
pub type Vec3 = nalgebra::Vector3<f64>;
/// 3x3 matrix.
pub type Mat3 = nalgebra::Matrix3<f64>;
