use std::path::PathBuf;

use clap::{Args, ValueEnum};
use tetfit_core::mesh::{jitter, synth_ellipsoid, synth_sphere, synth_sphere_tet, write_obj, write_tetgen};
use tetfit_core::Vec3;

use super::Context;
use crate::error::{CliError, CliResult};
use crate::io::Staged;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    /// Icosphere surface (OBJ).
    Sphere,
    /// Tetrahedralized ball (TetGen `.node`/`.ele`).
    SphereTet,
    /// Ellipsoid surface (OBJ).
    Ellipsoid,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub shape: Shape,
    /// Subdivision level for surfaces (default 3), grid cells across the
    /// diameter for `sphere-tet` (default 8).
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Radius in meters for `sphere` and `sphere-tet`.
    #[arg(long, default_value_t = 0.1)]
    pub radius: f64,
    /// Semi-axes `a,b,c` in meters for `ellipsoid`.
    #[arg(long, value_delimiter = ',')]
    pub semi_axes: Option<Vec<f64>>,
    /// Uniform vertex noise amplitude in meters (surfaces only), seeded by
    /// `--seed`.
    #[arg(long, default_value_t = 0.0)]
    pub jitter: f64,
    /// Output OBJ path, or output stem for `sphere-tet`.
    #[arg(long)]
    pub out: PathBuf,
}

fn subdivisions(resolution: Option<usize>) -> CliResult<u32> {
    let r = resolution.unwrap_or(3);
    u32::try_from(r)
        .ok()
        .filter(|&r| r <= 8)
        .ok_or_else(|| CliError::Usage(format!("surface resolution must be at most 8, got {r}")))
}

pub fn run(ctx: &Context, args: &SynthArgs) -> CliResult<i32> {
    if !(args.jitter >= 0.0) {
        return Err(CliError::Usage("--jitter must be non-negative".into()));
    }
    let mut staged = Staged::default();
    let summary = match args.shape {
        Shape::SphereTet => {
            if args.jitter > 0.0 {
                return Err(CliError::Usage("--jitter applies to surface shapes only".into()));
            }
            let mesh = synth_sphere_tet(args.resolution.unwrap_or(8), args.radius)?;
            let (node, ele) = write_tetgen(&mesh);
            let stem = args.out.with_extension("");
            staged.add(stem.with_extension("node"), node.as_bytes())?;
            staged.add(stem.with_extension("ele"), ele.as_bytes())?;
            format!("{} vertices, {} tets", mesh.vertex_count(), mesh.tet_count())
        }
        Shape::Sphere | Shape::Ellipsoid => {
            let level = subdivisions(args.resolution)?;
            let mesh = if args.shape == Shape::Sphere {
                synth_sphere(level, args.radius)?
            } else {
                let axes = args
                    .semi_axes
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("ellipsoid needs --semi-axes a,b,c".into()))?;
                let &[a, b, c] = axes else {
                    return Err(CliError::Usage(format!(
                        "--semi-axes needs three values, got {}",
                        axes.len()
                    )));
                };
                synth_ellipsoid(level, Vec3::new(a, b, c))?
            };
            let mesh = jitter(&mesh, args.jitter, ctx.seed);
            staged.add(&args.out, write_obj(&mesh).as_bytes())?;
            format!("{} vertices, {} faces", mesh.vertex_count(), mesh.face_count())
        }
    };
    for path in staged.commit()? {
        ctx.say(format!("wrote {}", path.display()));
    }
    ctx.say(summary);
    Ok(0)
}
