//! Strain-limiting tet constraints.
//!
//! The projection clamps the singular values of the deformation gradient to
//! `[1/(1+α), 1+α]`, using the rotation-variant SVD so inverted tets are
//! pushed back to positive orientation.

use super::Component;
use crate::geom::signed_svd;
use crate::{Error, Mat3, Result, Vec3};

#[derive(Debug, Clone, PartialEq)]
pub struct TetStrain {
    pub component: Component,
    pub indices: [usize; 4],
    /// Inverse of the rest edge matrix `[x1-x0, x2-x0, x3-x0]`.
    pub rest_inv: Mat3,
    pub rest_volume: f64,
    pub alpha: f64,
    pub weight: f64,
}

impl TetStrain {
    pub fn new(component: Component, indices: [usize; 4], rest: &[Vec3], alpha: f64, weight: f64) -> Result<Self> {
        let [a, b, c, d] = indices.map(|i| rest[i]);
        let edges = Mat3::from_columns(&[b - a, c - a, d - a]);
        let rest_volume = edges.determinant() / 6.0;
        if !(rest_volume > 0.0) {
            return Err(Error::InvalidMesh(format!(
                "rest tet {indices:?} has non-positive volume"
            )));
        }
        let rest_inv = edges
            .try_inverse()
            .ok_or_else(|| Error::InvalidMesh(format!("rest tet {indices:?} is singular")))?;
        Ok(Self {
            component,
            indices,
            rest_inv,
            rest_volume,
            alpha,
            weight,
        })
    }

    pub fn gradient(&self, q: &[Vec3]) -> Mat3 {
        deformation_gradient(&self.rest_inv, &self.indices.map(|i| q[i]))
    }

    /// Weight of the quadratic `|F - T|²` term: `w` times rest volume.
    pub fn stiffness(&self) -> f64 {
        self.weight * self.rest_volume
    }

    /// Coefficients `g_j` with `F = Σ_j x_j g_jᵀ`.
    pub fn gradient_operator(&self) -> [Vec3; 4] {
        let rows: [Vec3; 3] = std::array::from_fn(|k| self.rest_inv.row(k).transpose());
        [-(rows[0] + rows[1] + rows[2]), rows[0], rows[1], rows[2]]
    }
}

/// `F = D * rest_inv`, with `D` the current edge matrix.
pub fn deformation_gradient(rest_inv: &Mat3, x: &[Vec3; 4]) -> Mat3 {
    Mat3::from_columns(&[x[1] - x[0], x[2] - x[0], x[3] - x[0]]) * rest_inv
}

/// Closest gradient to `f` whose singular values lie in `[1/(1+α), 1+α]`
/// with positive determinant. A numerically zero `f` maps to the identity.
pub fn strain_target(f: &Mat3, alpha: f64) -> Mat3 {
    if f.norm() < 1e-12 {
        return Mat3::identity();
    }
    let svd = signed_svd(f);
    let (lo, hi) = (1.0 / (1.0 + alpha), 1.0 + alpha);
    svd.recompose(&svd.sigma.map(|s| s.clamp(lo, hi)))
}

/// `1/2 |F - T|²` for the current positions, without weight or volume.
pub fn tet_strain_energy(rest_inv: &Mat3, x: &[Vec3; 4], alpha: f64) -> f64 {
    let f = deformation_gradient(rest_inv, x);
    0.5 * (f - strain_target(&f, alpha)).norm_squared()
}

/// Projected tet positions: the rest shape mapped through the clamped
/// gradient and placed at the current centroid.
pub fn project_tet_strain(rest_inv: &Mat3, x: &[Vec3; 4], alpha: f64) -> [Vec3; 4] {
    let target = strain_target(&deformation_gradient(rest_inv, x), alpha);
    let edges = rest_inv.try_inverse().expect("rest matrix is invertible");
    let rest = [
        Vec3::zeros(),
        edges.column(0).into(),
        edges.column(1).into(),
        edges.column(2).into(),
    ];
    let rest_centroid = rest.iter().sum::<Vec3>() / 4.0;
    let centroid = x.iter().sum::<Vec3>() / 4.0;
    rest.map(|r| centroid + target * (r - rest_centroid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Rotation3;

    fn rest() -> [Vec3; 4] {
        [
            Vec3::zeros(),
            Vec3::new(1.0, 0.1, 0.0),
            Vec3::new(0.2, 0.9, 0.1),
            Vec3::new(0.1, 0.2, 1.1),
        ]
    }

    fn rest_inv() -> Mat3 {
        let r = rest();
        Mat3::from_columns(&[r[1] - r[0], r[2] - r[0], r[3] - r[0]])
            .try_inverse()
            .unwrap()
    }

    #[test]
    fn rigid_motion_is_admissible() {
        let rot = Rotation3::from_euler_angles(0.3, -1.1, 2.0);
        let t = Vec3::new(5.0, -2.0, 0.5);
        let x = rest().map(|p| rot * p + t);
        let projected = project_tet_strain(&rest_inv(), &x, 0.01);
        for (p, c) in projected.iter().zip(&x) {
            assert!((p - c).norm() < 1e-10);
        }
        assert!(tet_strain_energy(&rest_inv(), &x, 0.01) < 1e-10);
    }

    #[test]
    fn scale_on_band_edge_is_admissible() {
        let x = rest().map(|p| p * 1.01);
        let projected = project_tet_strain(&rest_inv(), &x, 0.01);
        for (p, c) in projected.iter().zip(&x) {
            assert!((p - c).norm() < 1e-12);
        }
    }

    #[test]
    fn doubling_is_clamped_to_band() {
        let x = rest().map(|p| p * 2.0);
        let projected = project_tet_strain(&rest_inv(), &x, 0.01);
        let f = deformation_gradient(&rest_inv(), &projected);
        let sv = f.singular_values();
        for s in sv.iter() {
            assert!((s - 1.01).abs() < 1e-10, "{sv:?}");
        }
        let centroid = |x: &[Vec3; 4]| x.iter().sum::<Vec3>() / 4.0;
        assert!((centroid(&projected) - centroid(&x)).norm() < 1e-12);
    }

    #[test]
    fn collapsed_tet_projects_to_rest_shape() {
        let x = [Vec3::new(1.0, 1.0, 1.0); 4];
        let projected = project_tet_strain(&rest_inv(), &x, 0.01);
        let f = deformation_gradient(&rest_inv(), &projected);
        assert!((f - Mat3::identity()).norm() < 1e-12);
    }

    #[test]
    fn inverted_tet_projects_to_positive_orientation() {
        let mut x = rest();
        x.swap(2, 3);
        let projected = project_tet_strain(&rest_inv(), &x, 0.01);
        assert!(deformation_gradient(&rest_inv(), &projected).determinant() > 0.0);
    }

    #[test]
    fn operator_reproduces_gradient() {
        let c = TetStrain::new(Component::S, [0, 1, 2, 3], &rest(), 0.01, 1.0).unwrap();
        let x = [
            Vec3::new(0.1, 0.0, 0.3),
            Vec3::new(1.0, 0.5, 0.0),
            Vec3::new(0.0, 1.2, 0.1),
            Vec3::new(0.3, 0.2, 0.9),
        ];
        let g = c.gradient_operator();
        let f: Mat3 = (0..4).map(|j| x[j] * g[j].transpose()).sum();
        assert!((f - c.gradient(&x)).norm() < 1e-12);
    }
}
