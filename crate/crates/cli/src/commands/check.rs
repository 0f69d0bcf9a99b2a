use std::path::PathBuf;

use clap::{Args, ValueEnum};

use super::Context;
use crate::error::{CliError, CliResult};
use crate::io::{read_obj_unchecked, read_tetgen_unchecked};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    /// Head surface.
    H,
    /// Jaw surface.
    J,
    /// Cranium surface.
    C,
    /// Soft-tissue tet mesh.
    Ts,
    /// Jaw tet mesh.
    Tj,
    /// Cranium tet mesh.
    Tc,
}

impl Expect {
    /// Reference (vertices, faces or tets) counts of the reference template.
    pub fn counts(self) -> (usize, usize) {
        match self {
            Expect::H => (6688, 13372),
            Expect::J => (886, 1768),
            Expect::C => (4220, 8444),
            Expect::Ts => (11001, 31456),
            Expect::Tj => (899, 4190),
            Expect::Tc => (3354, 15634),
        }
    }

    fn is_tet(self) -> bool {
        matches!(self, Expect::Ts | Expect::Tj | Expect::Tc)
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// OBJ surface, or TetGen `.node`/`.ele` file (or their common stem).
    pub path: PathBuf,
    /// Compare counts against a reference template component.
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
}

pub fn run(ctx: &Context, args: &CheckArgs) -> CliResult<i32> {
    let is_obj = args.path.extension().is_some_and(|e| e.eq_ignore_ascii_case("obj"));
    if let Some(expect) = args.expect {
        if expect.is_tet() == is_obj {
            return Err(CliError::Usage(format!(
                "--expect {} does not apply to {}",
                expect.to_possible_value().expect("named").get_name(),
                args.path.display()
            )));
        }
    }

    // Second count: faces for surfaces; tets and boundary faces for tet meshes.
    let (report, second) = if is_obj {
        let mesh = read_obj_unchecked(&args.path)?;
        let faces = mesh.face_count();
        (mesh.report(), vec![("faces", faces)])
    } else {
        let mesh = read_tetgen_unchecked(&args.path)?;
        let tets = mesh.tet_count();
        let boundary = mesh.boundary_faces().len();
        (mesh.report(), vec![("tets", tets), ("boundary faces", boundary)])
    };
    println!("{}", report.to_json());

    let mut ok = report.is_clean();
    if !ok {
        ctx.say(format!("{} defect(s)", report.defects.len()));
    }
    if let Some(expect) = args.expect {
        let (vertices, count) = expect.counts();
        let matched: Vec<&str> = second
            .iter()
            .filter(|(_, n)| *n == count)
            .map(|(name, _)| *name)
            .collect();
        let vertices_ok = report.vertex_count == vertices;
        if vertices_ok && !matched.is_empty() {
            ctx.say(format!(
                "counts match reference {vertices}/{count} (as {})",
                matched.join(" and ")
            ));
        } else {
            let actual: Vec<String> = second.iter().map(|(name, n)| format!("{n} {name}")).collect();
            ctx.say(format!(
                "counts differ from reference {vertices}/{count}: {} vertices, {}",
                report.vertex_count,
                actual.join(", ")
            ));
            ok = false;
        }
    }
    Ok(if ok { 0 } else { 2 })
}
