mod common;

use std::sync::Arc;

use common::{ball_template, ellipsoid_target, BALL_RADIUS};
use tetfit_core::constraints::Obstacle;
use tetfit_core::mesh::synth_sphere;
use tetfit_core::ridge::RidgeEntry;
use tetfit_core::solver::fit;
use tetfit_core::{Error, Plane, RidgeTargets, SolverParams, Vec3, Weights};

fn mean_radius(points: &[Vec3]) -> f64 {
    points.iter().map(|p| p.norm()).sum::<f64>() / points.len() as f64
}

#[test]
fn identity_target_converges_immediately() {
    let template = ball_template();
    let target = template.boundary().clone();
    let result = fit(&template, &target, None, &Weights::default(), &SolverParams::default()).unwrap();
    assert!(result.converged);
    assert!(result.reports.len() <= 2, "{}", result.reports.len());
    assert!(result.final_mean_surface_dist() < 1e-6 * target.bbox_diag());
}

#[test]
fn ellipsoid_fit_reduces_distance() {
    let template = ball_template();
    let result = fit(
        &template,
        &ellipsoid_target(),
        None,
        &Weights::default(),
        &SolverParams::default(),
    )
    .unwrap();
    assert!(result.converged);
    let reduction = 1.0 - result.final_mean_surface_dist() / result.initial_mean_surface_dist;
    assert!(reduction >= 0.9, "reduction {reduction}");
    assert_eq!(result.factorizations, result.factorizations.max(1));
    // Surface attraction may flatten a few boundary slivers, but only marginally.
    let fitted = &template.fitted_components(&result.state.q).unwrap()[0].1;
    let rest = &template.components()[0].1;
    let mean_rest = rest.total_volume() / rest.tet_count() as f64;
    let inverted: Vec<f64> = (0..fitted.tet_count())
        .map(|t| fitted.tet_volume(t))
        .filter(|&v| v <= 0.0)
        .collect();
    assert!(inverted.len() * 100 < fitted.tet_count());
    assert!(inverted.iter().all(|&v| v > -0.05 * mean_rest));
}

#[test]
fn looser_tolerance_stops_no_later() {
    let template = ball_template();
    let target = ellipsoid_target();
    let run = |delta_eps| {
        let params = SolverParams {
            delta_eps,
            ..SolverParams::default()
        };
        fit(&template, &target, None, &Weights::default(), &params)
            .unwrap()
            .reports
            .len()
    };
    assert!(run(0.05) <= run(0.01));
}

#[test]
fn fit_is_deterministic() {
    let template = ball_template();
    let target = ellipsoid_target();
    let a = fit(&template, &target, None, &Weights::default(), &SolverParams::default()).unwrap();
    let b = fit(&template, &target, None, &Weights::default(), &SolverParams::default()).unwrap();
    assert_eq!(a.state, b.state);
    assert_eq!(a.report_json(), b.report_json());
}

#[test]
fn ridge_targets_pull_boundary_vertices() {
    let template = ball_template();
    let boundary = template.boundary().vertices();
    let top = (0..boundary.len())
        .max_by(|&a, &b| boundary[a].z.total_cmp(&boundary[b].z))
        .unwrap();
    let lifted = boundary[top] + Vec3::new(0.0, 0.0, 0.01);
    let ridge = RidgeTargets {
        plane: Plane::new(boundary[top], Vec3::z()).unwrap(),
        entries: vec![RidgeEntry {
            index: top,
            target: lifted,
            kappa: 1.0,
        }],
    };
    let target = template.boundary().clone();
    let params = SolverParams::default();
    let plain = fit(&template, &target, None, &Weights::default(), &params).unwrap();
    let pulled = fit(&template, &target, Some(&ridge), &Weights::default(), &params).unwrap();
    let v = template.boundary_map()[top];
    assert!(pulled.state.q[v].z > plain.state.q[v].z + 1e-3);

    let bad = RidgeTargets {
        entries: vec![RidgeEntry {
            index: boundary.len(),
            target: lifted,
            kappa: 1.0,
        }],
        ..ridge
    };
    assert!(matches!(
        fit(&template, &target, Some(&bad), &Weights::default(), &params),
        Err(Error::IndexOutOfRange { .. })
    ));
}

#[test]
fn pull_moves_its_vertex() {
    let mut template = ball_template();
    let v = template.boundary_map()[0];
    let goal = template.rest_positions()[v] * 1.1;
    template.pulls.push((v, goal));
    let target = template.boundary().clone();
    let result = fit(&template, &target, None, &Weights::default(), &SolverParams::default()).unwrap();
    let rest = template.rest_positions()[v];
    assert!((result.state.q[v] - goal).norm() < (rest - goal).norm());
}

#[test]
fn obstacle_resists_shrinking() {
    let shrunk = synth_sphere(4, 0.8 * BALL_RADIUS).unwrap();
    let template = ball_template();
    let free = fit(&template, &shrunk, None, &Weights::default(), &SolverParams::default()).unwrap();

    let mut blocked = ball_template();
    blocked.obstacle = Some(Arc::new(
        Obstacle::new(synth_sphere(3, 0.9 * BALL_RADIUS).unwrap()).unwrap(),
    ));
    let pushed = fit(&blocked, &shrunk, None, &Weights::default(), &SolverParams::default()).unwrap();

    let free_r = mean_radius(&template.boundary_positions(&free.state.q));
    let pushed_r = mean_radius(&blocked.boundary_positions(&pushed.state.q));
    assert!(pushed_r > free_r + 1e-3, "{pushed_r} vs {free_r}");
}

#[test]
fn unreachable_target_fails() {
    let template = ball_template();
    let far = synth_sphere(3, BALL_RADIUS)
        .unwrap()
        .map_vertices(|v| v + Vec3::new(10.0, 0.0, 0.0));
    assert!(matches!(
        fit(&template, &far, None, &Weights::default(), &SolverParams::default()),
        Err(Error::NoCorrespondences { iterations: 3 })
    ));
}

#[test]
fn invalid_inputs_are_rejected() {
    let template = ball_template();
    let target = ellipsoid_target();
    let weights = Weights {
        w_s: -1.0,
        ..Weights::default()
    };
    assert!(fit(&template, &target, None, &weights, &SolverParams::default()).is_err());
    let params = SolverParams {
        timestep: 0.0,
        ..SolverParams::default()
    };
    assert!(fit(&template, &target, None, &Weights::default(), &params).is_err());
}
