use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

/// Plane in normal form: the points `x` with `(x - point) · normal = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub point: Vec3,
    normal: Vec3,
}

impl Plane {
    /// Normalizes `normal`; fails when it has (near) zero length.
    pub fn new(point: Vec3, normal: Vec3) -> Result<Self> {
        let len = normal.norm();
        if !(len > 1e-300) || !len.is_finite() {
            return Err(Error::DegenerateNormal);
        }
        Ok(Self {
            point,
            normal: normal / len,
        })
    }

    pub fn normal(&self) -> Vec3 {
        self.normal
    }

    pub fn signed_distance(&self, v: &Vec3) -> f64 {
        (v - self.point).dot(&self.normal)
    }
}

/// Orthogonal projection of `v` onto `plane`.
pub fn project_point_plane(v: &Vec3, plane: &Plane) -> Vec3 {
    v - plane.normal * plane.signed_distance(v)
}

/// Finite cylinder between two cap centres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CylinderRecord", into = "CylinderRecord")]
pub struct Cylinder {
    start: Vec3,
    end: Vec3,
    radius: f64,
}

impl Cylinder {
    pub fn new(start: Vec3, end: Vec3, radius: f64) -> Result<Self> {
        if !start.iter().chain(end.iter()).all(|c| c.is_finite()) {
            return Err(Error::InvalidCylinder("non-finite endpoint".into()));
        }
        if !((end - start).norm() > 0.0) {
            return Err(Error::InvalidCylinder("start and end coincide".into()));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidCylinder(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { start, end, radius })
    }

    pub fn start(&self) -> Vec3 {
        self.start
    }

    pub fn end(&self) -> Vec3 {
        self.end
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }

    /// Midpoint of the axis.
    pub fn axis_midpoint(&self) -> Vec3 {
        (self.start + self.end) / 2.0
    }

    pub fn transformed(&self, f: impl Fn(&Vec3) -> Vec3) -> Result<Self> {
        Self::new(f(&self.start), f(&self.end), self.radius)
    }
}

/// JSON form: `{start:[x,y,z], end:[x,y,z], radius}` in meters. A missing
/// radius defaults to 0.5 cm.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CylinderRecord {
    start: [f64; 3],
    end: [f64; 3],
    #[serde(default = "default_radius")]
    radius: f64,
}

fn default_radius() -> f64 {
    crate::solver::DEFAULT_CYLINDER_RADIUS
}

impl TryFrom<CylinderRecord> for Cylinder {
    type Error = Error;

    fn try_from(r: CylinderRecord) -> Result<Self> {
        Cylinder::new(r.start.into(), r.end.into(), r.radius)
    }
}

impl From<Cylinder> for CylinderRecord {
    fn from(c: Cylinder) -> Self {
        Self {
            start: c.start.into(),
            end: c.end.into(),
            radius: c.radius,
        }
    }
}

/// Closed-interval membership test: axial coordinate in `[0, len]` and
/// radial distance `<= radius`.
pub fn point_in_cylinder(v: &Vec3, c: &Cylinder) -> bool {
    let axis = c.end - c.start;
    let len = axis.norm();
    let dir = axis / len;
    let rel = v - c.start;
    let axial = rel.dot(&dir);
    if !(0.0..=len).contains(&axial) {
        return false;
    }
    (rel - dir * axial).norm() <= c.radius
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy_plane() -> Plane {
        Plane::new(Vec3::zeros(), Vec3::z()).unwrap()
    }

    #[test]
    fn axis_aligned_drop() {
        let p = project_point_plane(&Vec3::new(0.0, 0.5, 0.3), &xy_plane());
        assert_eq!(p, Vec3::new(0.0, 0.5, 0.0));
    }

    #[test]
    fn point_on_plane_is_fixed() {
        let v = Vec3::new(3.0, -1.0, 0.0);
        assert_eq!(project_point_plane(&v, &xy_plane()), v);
    }

    #[test]
    fn diagonal_normal() {
        let plane = Plane::new(Vec3::zeros(), Vec3::new(1.0, 1.0, 1.0)).unwrap();
        let p = project_point_plane(&Vec3::new(1.0, 1.0, 1.0), &plane);
        assert!(p.norm() < 1e-15);
    }

    #[test]
    fn plane_normal_is_unit() {
        let plane = Plane::new(Vec3::zeros(), Vec3::new(3.0, 4.0, 0.0)).unwrap();
        assert!((plane.normal().norm() - 1.0).abs() < 1e-15);
        assert!(Plane::new(Vec3::zeros(), Vec3::zeros()).is_err());
    }

    fn example_cylinder() -> Cylinder {
        Cylinder::new(Vec3::new(-1.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), 0.25).unwrap()
    }

    #[test]
    fn cylinder_membership() {
        let c = example_cylinder();
        assert!(point_in_cylinder(&Vec3::zeros(), &c));
        assert!(point_in_cylinder(&Vec3::new(0.5, 0.2, 0.0), &c));
        assert!(!point_in_cylinder(&Vec3::new(1.2, 0.0, 0.0), &c));
        assert!(!point_in_cylinder(&Vec3::new(0.0, 0.25 + 1e-9, 0.0), &c));
    }

    #[test]
    fn cylinder_boundary_is_inside() {
        let c = example_cylinder();
        assert!(point_in_cylinder(&Vec3::new(0.0, 0.25, 0.0), &c));
        assert!(point_in_cylinder(&Vec3::new(-1.0, 0.0, 0.0), &c));
        assert!(point_in_cylinder(&Vec3::new(1.0, 0.0, 0.1), &c));
    }

    #[test]
    fn cylinder_validation() {
        assert!(Cylinder::new(Vec3::zeros(), Vec3::zeros(), 1.0).is_err());
        assert!(Cylinder::new(Vec3::zeros(), Vec3::x(), 0.0).is_err());
    }

    #[test]
    fn cylinder_json() {
        let c: Cylinder = serde_json::from_str(r#"{"start":[-1,0,0],"end":[1,0,0],"radius":0.25}"#).unwrap();
        assert_eq!(c, example_cylinder());
        let back: Cylinder = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Cylinder>(r#"{"start":[0,0,0],"end":[0,0,0],"radius":1}"#).is_err());
        let thin: Cylinder = serde_json::from_str(r#"{"start":[0,0,0],"end":[0.1,0,0]}"#).unwrap();
        assert_eq!(thin.radius(), 0.005);
    }
}
