//! Weighted projective constraints.
//!
//! Every constraint has a quadratic energy `w/2 |A q - p|²`, where `A q` is a
//! linear function of the vertex positions (a single position, or a tet's
//! deformation gradient) and `p` is the constraint's projection: the closest
//! admissible value of `A q`. The solver alternates computing projections and
//! minimizing the summed quadratic.
//!
//! | kind           | `A q`                 | projection                              | weight |
//! |----------------|-----------------------|-----------------------------------------|--------|
//! | Target         | vertex position       | fixed target (ridge or template pin)    | w_tar  |
//! | TetStrain      | deformation gradient  | singular values clamped to the α band   | w_S/J/C × rest volume |
//! | Push           | vertex position       | outside the forbidden surface by margin | w_push |
//! | Pull           | vertex position       | fixed user target                       | w_pull |
//! | Correspondence | vertex position       | closest point on the target surface     | w_corr |
//!
//! Push, pull and correspondence are positional attractions; push is
//! one-sided and only acts inside the margin of its obstacle.

mod correspondence;
mod push;
mod strain;

pub use correspondence::{build_correspondences, CorrespondenceGate};
pub use push::{project_push, Obstacle};
pub use strain::{deformation_gradient, project_tet_strain, strain_target, tet_strain_energy, TetStrain};

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::{Mat3, Vec3};

/// Constraint weights, one per constraint family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Weights {
    pub w_tar: f64,
    #[serde(rename = "w_S")]
    pub w_s: f64,
    #[serde(rename = "w_J")]
    pub w_j: f64,
    #[serde(rename = "w_C")]
    pub w_c: f64,
    pub w_push: f64,
    pub w_pull: f64,
    pub w_corr: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Self {
            w_tar: 1e2,
            w_s: 1e1,
            w_j: 1e4,
            w_c: 1e4,
            w_push: 1e2,
            w_pull: 1e2,
            w_corr: 1e2,
        }
    }
}

impl Weights {
    pub fn strain(&self, component: Component) -> f64 {
        match component {
            Component::S => self.w_s,
            Component::J => self.w_j,
            Component::C => self.w_c,
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            self.w_tar,
            self.w_s,
            self.w_j,
            self.w_c,
            self.w_push,
            self.w_pull,
            self.w_corr,
        ];
        if all.iter().all(|w| w.is_finite() && *w >= 0.0) {
            Ok(())
        } else {
            Err(crate::Error::InvalidParams(format!(
                "weights must be finite and non-negative: {self:?}"
            )))
        }
    }
}

/// Tet-mesh component of a template, named by its strain weight symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    S,
    J,
    C,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::S, Component::J, Component::C];

    /// File stem used for this component's TetGen files.
    pub fn file_stem(self) -> &'static str {
        match self {
            Component::S => "tet-S",
            Component::J => "tet-J",
            Component::C => "tet-C",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstraintKind {
    Target,
    TetStrain,
    Push,
    Pull,
    Correspondence,
}

/// A single vertex attracted to a fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Positional {
    pub vertex: usize,
    pub target: Vec3,
    pub weight: f64,
}

/// One-sided contact against a closed surface.
#[derive(Debug, Clone)]
pub struct Push {
    pub vertex: usize,
    pub obstacle: Arc<Obstacle>,
    pub margin: f64,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub enum Constraint {
    Target(Positional),
    TetStrain(TetStrain),
    Push(Push),
    Pull(Positional),
    Correspondence(Positional),
}

/// Result of a local projection: a point for positional kinds, a target
/// deformation gradient for strain constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    Point(Vec3),
    Gradient(Mat3),
}

/// Projection of a pin constraint: the target itself.
pub fn project_target(_q: &Vec3, target: &Vec3) -> Vec3 {
    *target
}

impl Constraint {
    pub fn kind(&self) -> ConstraintKind {
        match self {
            Constraint::Target(_) => ConstraintKind::Target,
            Constraint::TetStrain(_) => ConstraintKind::TetStrain,
            Constraint::Push(_) => ConstraintKind::Push,
            Constraint::Pull(_) => ConstraintKind::Pull,
            Constraint::Correspondence(_) => ConstraintKind::Correspondence,
        }
    }

    pub fn weight(&self) -> f64 {
        match self {
            Constraint::Target(p) | Constraint::Pull(p) | Constraint::Correspondence(p) => p.weight,
            Constraint::TetStrain(t) => t.weight,
            Constraint::Push(p) => p.weight,
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        match self {
            Constraint::Target(p) | Constraint::Pull(p) | Constraint::Correspondence(p) => vec![p.vertex],
            Constraint::TetStrain(t) => t.indices.to_vec(),
            Constraint::Push(p) => vec![p.vertex],
        }
    }

    /// Same constraint with every vertex index passed through `f`.
    pub fn map_indices(mut self, f: impl Fn(usize) -> usize) -> Self {
        match &mut self {
            Constraint::Target(p) | Constraint::Pull(p) | Constraint::Correspondence(p) => p.vertex = f(p.vertex),
            Constraint::TetStrain(t) => t.indices = t.indices.map(&f),
            Constraint::Push(p) => p.vertex = f(p.vertex),
        }
        self
    }

    /// Closest admissible value of `A q` for the current positions.
    pub fn project(&self, q: &[Vec3]) -> Projection {
        match self {
            Constraint::Target(p) | Constraint::Pull(p) | Constraint::Correspondence(p) => {
                Projection::Point(project_target(&q[p.vertex], &p.target))
            }
            Constraint::TetStrain(t) => Projection::Gradient(strain_target(&t.gradient(q), t.alpha)),
            Constraint::Push(p) => {
                let x = q[p.vertex];
                Projection::Point(p.obstacle.project(&x, p.margin).unwrap_or(x))
            }
        }
    }

    /// `w/2 |A q - p|²` for a given projection.
    pub fn energy_with(&self, q: &[Vec3], projection: &Projection) -> f64 {
        match (self, projection) {
            (Constraint::TetStrain(t), Projection::Gradient(target)) => {
                0.5 * t.stiffness() * (t.gradient(q) - target).norm_squared()
            }
            (_, Projection::Point(target)) => {
                let vertex = self.indices()[0];
                0.5 * self.weight() * (q[vertex] - target).norm_squared()
            }
            _ => panic!("projection does not match constraint kind"),
        }
    }

    /// Energy at the current positions with the current projection.
    pub fn energy(&self, q: &[Vec3]) -> f64 {
        self.energy_with(q, &self.project(q))
    }

    /// Debug record: `{kind, indices, weight, payload}`.
    pub fn to_json(&self) -> serde_json::Value {
        let payload = match self {
            Constraint::Target(p) | Constraint::Pull(p) | Constraint::Correspondence(p) => {
                json!({ "target": <[f64; 3]>::from(p.target) })
            }
            Constraint::TetStrain(t) => json!({
                "component": t.component,
                "rest_inv": t.rest_inv.transpose().as_slice().chunks(3).collect::<Vec<_>>(),
                "rest_volume": t.rest_volume,
                "alpha": t.alpha,
            }),
            Constraint::Push(p) => json!({ "margin": p.margin }),
        };
        json!({
            "kind": self.kind(),
            "indices": self.indices(),
            "weight": self.weight(),
            "payload": payload,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_weights() {
        let w = Weights::default();
        assert_eq!(
            [w.w_tar, w.w_s, w.w_j, w.w_c, w.w_push, w.w_pull, w.w_corr],
            [1e2, 1e1, 1e4, 1e4, 1e2, 1e2, 1e2]
        );
    }

    #[test]
    fn weights_json_uses_symbol_names() {
        let value = serde_json::to_value(Weights::default()).unwrap();
        assert_eq!(value["w_S"], 10.0);
        let partial: Weights = serde_json::from_str(r#"{"w_J": 5}"#).unwrap();
        assert_eq!(partial.w_j, 5.0);
        assert_eq!(partial.w_c, 1e4);
        assert!(serde_json::from_str::<Weights>(r#"{"w_x": 5}"#).is_err());
    }

    #[test]
    fn pin_projection_and_energy() {
        let q = [Vec3::new(1.0, 2.0, 3.0)];
        assert_eq!(project_target(&q[0], &Vec3::zeros()), Vec3::zeros());
        let c = Constraint::Target(Positional {
            vertex: 0,
            target: Vec3::new(1.0, 2.0, 3.1),
            weight: 1e2,
        });
        assert!((c.energy(&q) - 0.5).abs() < 1e-12);
        let at_target = Constraint::Target(Positional {
            vertex: 0,
            target: q[0],
            weight: 1e2,
        });
        assert_eq!(at_target.energy(&q), 0.0);
    }

    #[test]
    fn json_record() {
        let c = Constraint::Pull(Positional {
            vertex: 3,
            target: Vec3::new(1.0, 2.0, 3.0),
            weight: 7.0,
        });
        let v = c.to_json();
        assert_eq!(v["kind"], "Pull");
        assert_eq!(v["indices"], json!([3]));
        assert_eq!(v["weight"], 7.0);
        assert_eq!(v["payload"]["target"], json!([1.0, 2.0, 3.0]));
    }
}
