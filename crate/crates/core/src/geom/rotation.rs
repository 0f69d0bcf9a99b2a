use crate::{Error, Mat3, Result, Vec3};

/// Relative off-diagonal convergence threshold of the 3x3 SVD iteration.
/// Results are accurate to well below 1e-10.
pub const SVD_TOLERANCE: f64 = f64::EPSILON;

/// Rotation-variant SVD `m = u * diag(sigma) * vᵀ` with `u`, `v` proper
/// rotations. Singular values are sorted by decreasing magnitude; only the
/// last one may be negative (when `det m < 0`).
#[derive(Debug, Clone, Copy)]
pub struct SignedSvd {
    pub u: Mat3,
    pub sigma: Vec3,
    pub v: Mat3,
}

impl SignedSvd {
    pub fn recompose(&self, sigma: &Vec3) -> Mat3 {
        self.u * Mat3::from_diagonal(sigma) * self.v.transpose()
    }
}

pub fn signed_svd(m: &Mat3) -> SignedSvd {
    let svd = m
        .try_svd(true, true, SVD_TOLERANCE, 0)
        .unwrap_or_else(|| m.svd(true, true));
    let (mut u, mut v) = (svd.u.expect("u requested"), svd.v_t.expect("v requested").transpose());
    let mut sigma = svd.singular_values;

    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let permute = |m: &Mat3| Mat3::from_columns(&order.map(|k| m.column(k).into_owned()));
    u = permute(&u);
    v = permute(&v);
    sigma = Vec3::new(sigma[order[0]], sigma[order[1]], sigma[order[2]]);

    if u.determinant() < 0.0 {
        u.column_mut(2).neg_mut();
        sigma[2] = -sigma[2];
    }
    if v.determinant() < 0.0 {
        v.column_mut(2).neg_mut();
        sigma[2] = -sigma[2];
    }
    SignedSvd { u, sigma, v }
}

/// Closest proper rotation to `m` in the Frobenius norm. Reflections are
/// resolved by flipping the axis of the smallest singular value.
pub fn best_fit_rotation(m: &Mat3) -> Result<Mat3> {
    if !m.iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidParams("non-finite matrix".into()));
    }
    let svd = signed_svd(m);
    if svd.sigma.abs().max() < 1e-12 {
        return Err(Error::NumericallyZero);
    }
    Ok(svd.u * svd.v.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_rotation(r: &Mat3) {
        assert!((r.transpose() * r - Mat3::identity()).norm() < 1e-8);
        assert!((r.determinant() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn identity_and_scaled_identity() {
        let r = best_fit_rotation(&Mat3::identity()).unwrap();
        assert!((r - Mat3::identity()).norm() < 1e-12);
        let r = best_fit_rotation(&(Mat3::identity() * 2.0)).unwrap();
        assert!((r - Mat3::identity()).norm() < 1e-12);
    }

    #[test]
    fn reflection_gives_proper_rotation() {
        let m = Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
        let r = best_fit_rotation(&m).unwrap();
        assert_rotation(&r);
        assert!((r - m).norm() > 1.0);
    }

    #[test]
    fn zero_matrix_is_rejected() {
        assert!(matches!(best_fit_rotation(&Mat3::zeros()), Err(Error::NumericallyZero)));
    }

    #[test]
    fn signed_svd_recomposes() {
        let m = Mat3::new(0.3, -1.2, 0.5, 2.0, 0.1, -0.7, 0.4, 0.9, -1.5);
        let svd = signed_svd(&m);
        assert!((svd.recompose(&svd.sigma) - m).norm() < 1e-12);
        assert_rotation(&svd.u);
        assert_rotation(&svd.v);
        assert!(svd.sigma[0] >= svd.sigma[1] && svd.sigma[1] >= svd.sigma[2].abs());
        assert_eq!(svd.sigma[2] < 0.0, m.determinant() < 0.0);
    }
}
