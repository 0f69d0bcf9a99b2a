use serde::{Deserialize, Serialize};

use crate::{Error, Result};

// Reference values in the units they are usually quoted in.
const L_MIN_CM: f64 = 2.5;
const CONTACT_RADIUS_CM: f64 = 0.5;
const TIMESTEP_MS: f64 = 50.0;

/// Default cylinder radius in meters (0.5 cm).
pub const DEFAULT_CYLINDER_RADIUS: f64 = CONTACT_RADIUS_CM / 100.0;

/// Solver parameters. Lengths in meters, time in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverParams {
    /// Local/global iterations per solve.
    pub pd_iterations: usize,
    /// Strain band half-width: singular values are kept in `[1/(1+α), 1+α]`.
    pub alpha: f64,
    /// Minimum cylinder length accepted by the ridge generator.
    pub l_min: f64,
    /// Offset kept between pushed vertices and the forbidden surface.
    pub contact_margin: f64,
    /// Radius used for cylinders that do not specify one.
    pub cylinder_radius: f64,
    /// Momentum timestep of the regularizing inertia term.
    pub timestep: f64,
    /// Relative outer-energy change below which fitting stops.
    pub delta_eps: f64,
    /// Mass density, kg/m³.
    pub density: f64,
    pub max_outer_iterations: usize,
    /// Correspondence distance gate; `None` means `10 * contact_margin`.
    pub corr_max_dist: Option<f64>,
    pub corr_max_angle_deg: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            pd_iterations: 10,
            alpha: 0.01,
            l_min: L_MIN_CM / 100.0,
            contact_margin: CONTACT_RADIUS_CM / 100.0,
            cylinder_radius: DEFAULT_CYLINDER_RADIUS,
            timestep: TIMESTEP_MS / 1000.0,
            delta_eps: 0.05,
            density: 1000.0,
            max_outer_iterations: 50,
            corr_max_dist: None,
            corr_max_angle_deg: 60.0,
        }
    }
}

impl SolverParams {
    pub fn max_dist(&self) -> f64 {
        self.corr_max_dist.unwrap_or(10.0 * self.contact_margin)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        if self.pd_iterations < 1 {
            return fail("pd_iterations must be at least 1");
        }
        if !(self.timestep > 0.0) || !self.timestep.is_finite() {
            return fail("timestep must be positive");
        }
        if !(self.delta_eps > 0.0) {
            return fail("delta_eps must be positive");
        }
        if !(self.alpha >= 0.0) {
            return fail("alpha must be non-negative");
        }
        if !(self.density > 0.0) {
            return fail("density must be positive");
        }
        if !(self.l_min >= 0.0) || !(self.contact_margin >= 0.0) || !(self.cylinder_radius > 0.0) {
            return fail("lengths must be non-negative and the cylinder radius positive");
        }
        if self.corr_max_dist.is_some_and(|d| !(d >= 0.0)) || !(self.corr_max_angle_deg >= 0.0) {
            return fail("correspondence gates must be non-negative");
        }
        Ok(())
    }
}
