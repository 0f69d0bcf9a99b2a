//! Shared fixtures for the benchmarks.

use tetfit_core::mesh::{synth_ellipsoid, synth_sphere_tet};
use tetfit_core::{Component, SurfaceMesh, Template, Vec3};

/// Ball template with `resolution` grid cells across its 0.1 m radius.
pub fn ball_template(resolution: usize) -> Template {
    Template::new(vec![(
        Component::S,
        synth_sphere_tet(resolution, 0.1).expect("valid ball"),
    )])
    .expect("valid template")
}

pub fn ellipsoid_target() -> SurfaceMesh {
    synth_ellipsoid(4, Vec3::new(0.1, 0.12, 0.08)).expect("valid ellipsoid")
}
