use super::system::{constraint_energy, project_all, System};
use super::SolverParams;
use crate::constraints::Constraint;
use crate::mesh::is_finite;
use crate::{Error, Result, Vec3};

/// Evolving positions of a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct FitState {
    pub q: Vec<Vec3>,
    pub q_prev: Vec<Vec3>,
    /// Constraint energy after each iteration.
    pub energy_history: Vec<f64>,
}

impl FitState {
    /// State at rest: `q = q_prev = positions`.
    pub fn new(positions: Vec<Vec3>) -> Self {
        Self {
            q_prev: positions.clone(),
            q: positions,
            energy_history: Vec::new(),
        }
    }
}

/// One local/global iteration.
///
/// The local step projects every constraint at the current positions. The
/// global step minimizes the quadratic objective with the current positions
/// as the inertial anchor (zero velocity), so the constraint energy never
/// increases from one iteration to the next.
pub fn pd_iterate(state: &FitState, system: &System, constraints: &[Constraint]) -> Result<FitState> {
    let projections = project_all(constraints, &state.q);
    let q = system.solve(&state.q, constraints, &projections);
    let iteration = state.energy_history.len() + 1;
    if !q.iter().all(is_finite) {
        return Err(Error::Divergence { iteration });
    }
    let energy = constraint_energy(constraints, &q, &project_all(constraints, &q));
    if !energy.is_finite() {
        return Err(Error::Divergence { iteration });
    }
    let mut energy_history = state.energy_history.clone();
    energy_history.push(energy);
    Ok(FitState {
        q_prev: state.q.clone(),
        q,
        energy_history,
    })
}

/// Runs exactly `params.pd_iterations` iterations.
pub fn pd_solve(
    state: &FitState,
    system: &System,
    constraints: &[Constraint],
    params: &SolverParams,
) -> Result<FitState> {
    let mut state = state.clone();
    for _ in 0..params.pd_iterations {
        state = pd_iterate(&state, system, constraints)?;
    }
    Ok(state)
}
