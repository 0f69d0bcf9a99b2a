#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tetfit_core::mesh::{synth_ellipsoid, synth_sphere_tet};
use tetfit_core::{Component, Mat3, SurfaceMesh, Template, TetMesh, Vec3};

pub const BALL_RADIUS: f64 = 0.1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ball of about a thousand tets, head-sized.
pub fn ball() -> TetMesh {
    synth_sphere_tet(7, BALL_RADIUS).unwrap()
}

pub fn ball_template() -> Template {
    Template::new(vec![(Component::S, ball())]).unwrap()
}

/// Ellipsoid with semi-axes 1.0 / 1.2 / 0.8 of the ball radius.
pub fn ellipsoid_target() -> SurfaceMesh {
    synth_ellipsoid(4, Vec3::new(1.0, 1.2, 0.8) * BALL_RADIUS).unwrap()
}

pub fn random_vec(rng: &mut impl Rng, scale: f64) -> Vec3 {
    Vec3::from_fn(|_, _| rng.random_range(-scale..scale))
}

/// Uniformly random rotation from a normalized Gaussian-ish quaternion.
pub fn random_rotation(rng: &mut impl Rng) -> Mat3 {
    loop {
        let q = nalgebra::Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let n = q.norm();
        if n > 0.1 && n <= 1.0 {
            let q = nalgebra::UnitQuaternion::from_quaternion(nalgebra::Quaternion::from(q / n));
            return *q.to_rotation_matrix().matrix();
        }
    }
}
