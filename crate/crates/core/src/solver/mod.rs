//! Projective-dynamics solver and the template fitting loop.

mod fit;
mod params;
mod pd;
pub mod sparse;
mod system;

pub use fit::{fit, FitResult, OuterReport, Template};
pub use params::{SolverParams, DEFAULT_CYLINDER_RADIUS};
pub use pd::{pd_iterate, pd_solve, FitState};
pub use system::{assemble, constraint_energy, lumped_masses, project_all, System};
