mod common;

use proptest::prelude::*;
use tetfit_core::mesh::{mesh_mean, parse_obj, parse_tetgen, synth_sphere, synth_sphere_tet, write_obj, write_tetgen};
use tetfit_core::{SurfaceMesh, Vec3};

fn arb_mesh() -> impl Strategy<Value = SurfaceMesh> {
    let vertices = prop::collection::vec(prop::array::uniform3(-1e3f64..1e3), 50);
    let faces = prop::collection::vec(
        prop::sample::subsequence((0..50usize).collect::<Vec<_>>(), 3).prop_shuffle(),
        0..80,
    );
    (vertices, faces).prop_map(|(v, f)| {
        SurfaceMesh::new(
            v.into_iter().map(Vec3::from).collect(),
            f.into_iter().map(|f| [f[0], f[1], f[2]]).collect(),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn obj_round_trip(mesh in arb_mesh()) {
        let back = parse_obj(&write_obj(&mesh)).unwrap();
        prop_assert_eq!(back.faces(), mesh.faces());
        for (a, b) in back.vertices().iter().zip(mesh.vertices()) {
            prop_assert!((a - b).norm() <= 1e-9);
        }
    }

    #[test]
    fn mean_is_translation_equivariant(mesh in arb_mesh(), t in prop::array::uniform3(-10.0f64..10.0)) {
        let t = Vec3::from(t);
        let moved = mesh.map_vertices(|v| v + t);
        let lhs = mesh_mean(&moved).unwrap();
        let rhs = mesh_mean(&mesh).unwrap() + t;
        prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
    }
}

#[test]
fn synthetic_fixtures_validate() {
    for subdivisions in 0..4 {
        assert!(synth_sphere(subdivisions, 0.1).unwrap().report().is_clean());
    }
    for resolution in [1, 2, 4, 7, 12] {
        let ball = synth_sphere_tet(resolution, 0.1).unwrap();
        let report = ball.report();
        assert!(report.is_clean(), "{:?}", report.defects);
        assert!(report.min_element_measure > 0.0);
    }
}

#[test]
fn tetgen_round_trip_keeps_positive_volumes() {
    for resolution in [3, 7, 16] {
        let ball = synth_sphere_tet(resolution, 1.0).unwrap();
        let (node, ele) = write_tetgen(&ball);
        let back = parse_tetgen(&node, &ele).unwrap();
        assert_eq!(back.tets(), ball.tets());
        let min = (0..back.tet_count())
            .map(|t| back.tet_volume(t))
            .fold(f64::INFINITY, f64::min);
        assert!(min > 0.0);
    }
}

#[test]
fn ball_volume_within_five_percent() {
    let ball = synth_sphere_tet(16, 1.0).unwrap();
    let exact = 4.0 / 3.0 * std::f64::consts::PI;
    assert!((ball.total_volume() - exact).abs() / exact < 0.05);
}

/// Runs only when the reference head surface is supplied externally.
#[test]
fn reference_head_asset_counts() {
    let Ok(dir) = std::env::var("TETFIT_ASSET_DIR") else {
        eprintln!("TETFIT_ASSET_DIR not set; skipping");
        return;
    };
    let path = std::path::Path::new(&dir).join("H.obj");
    let Ok(text) = std::fs::read_to_string(&path) else {
        eprintln!("{} missing; skipping", path.display());
        return;
    };
    let head = parse_obj(&text).unwrap();
    assert_eq!((head.vertex_count(), head.face_count()), (6688, 13372));
}

#[test]
fn unchecked_parsers_surface_defects() {
    use tetfit_core::mesh::{parse_obj_unchecked, parse_tetgen_unchecked};

    let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\nf 1 2 2\n";
    assert!(parse_obj(text).is_err());
    let report = parse_obj_unchecked(text).unwrap().report();
    assert_eq!(report.defects.len(), 2);
    assert!(report.defects[0].contains("out of range"));
    assert!(report.defects[1].contains("repeated"));
    assert!(parse_obj_unchecked("v 0 x 0\n").is_err());

    let node = "5 3 0 0\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n5 1 1 0\n";
    // Reversed orientation is fixed; the flat tet and the bad reference are reported.
    let ele = "3 4 0\n1 1 3 2 4\n2 1 2 3 5\n3 1 2 3 9\n";
    assert!(parse_tetgen(node, ele).is_err());
    let mesh = parse_tetgen_unchecked(node, ele).unwrap();
    assert!(mesh.tet_volume(0) > 0.0);
    let report = mesh.report();
    assert_eq!(report.defects.len(), 2, "{:?}", report.defects);
    assert!(report.defects.iter().any(|d| d.contains("inverted or flat")));
    assert!(report.defects.iter().any(|d| d.contains("out of range")));
}
