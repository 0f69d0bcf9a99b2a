//! File loading and atomic writes.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use tetfit_core::constraints::Obstacle;
use tetfit_core::mesh::{parse_obj, parse_obj_unchecked, parse_tetgen, parse_tetgen_unchecked};
use tetfit_core::{Component, SurfaceMesh, Template, TetMesh, Vec3};

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_obj(path: &Path) -> CliResult<SurfaceMesh> {
    parse_obj(&read_text(path)?).map_err(|e| CliError::parse(path, e))
}

/// Reads an OBJ, rejecting only syntax errors.
pub fn read_obj_unchecked(path: &Path) -> CliResult<SurfaceMesh> {
    parse_obj_unchecked(&read_text(path)?).map_err(|e| CliError::parse(path, e))
}

fn tetgen_files(path: &Path) -> CliResult<(PathBuf, String, String)> {
    let stem = match path.extension().and_then(|e| e.to_str()) {
        Some("node") | Some("ele") => path.with_extension(""),
        _ => path.to_path_buf(),
    };
    let node = read_text(&stem.with_extension("node"))?;
    let ele = read_text(&stem.with_extension("ele"))?;
    Ok((stem, node, ele))
}

/// Reads `STEM.node` and `STEM.ele`. `path` may name either file or the
/// bare stem.
pub fn read_tetgen(path: &Path) -> CliResult<TetMesh> {
    let (stem, node, ele) = tetgen_files(path)?;
    parse_tetgen(&node, &ele).map_err(|e| CliError::parse(&stem, e))
}

/// Reads a TetGen pair, rejecting only syntax errors.
pub fn read_tetgen_unchecked(path: &Path) -> CliResult<TetMesh> {
    let (stem, node, ele) = tetgen_files(path)?;
    parse_tetgen_unchecked(&node, &ele).map_err(|e| CliError::parse(&stem, e))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PullRecord {
    vertex: usize,
    target: [f64; 3],
}

/// Loads a template directory: `tet-S.node/.ele` (required), `tet-J` and
/// `tet-C` (optional), `forbidden.obj` (optional obstacle) and `pulls.json`
/// (optional list of `{vertex, target}` on concatenated vertex indices).
pub fn read_template(dir: &Path) -> CliResult<Template> {
    if !dir.is_dir() {
        return Err(CliError::Usage(format!(
            "template directory {} does not exist",
            dir.display()
        )));
    }
    let mut components = Vec::new();
    for component in Component::ALL {
        let stem = dir.join(component.file_stem());
        let present = stem.with_extension("node").exists() || stem.with_extension("ele").exists();
        if component == Component::S || present {
            components.push((component, read_tetgen(&stem)?));
        }
    }
    let mut template = Template::new(components)?;

    let forbidden = dir.join("forbidden.obj");
    if forbidden.exists() {
        let surface = read_obj(&forbidden)?;
        template.obstacle = Some(Arc::new(
            Obstacle::new(surface).map_err(|e| CliError::parse(&forbidden, e))?,
        ));
    }
    let pulls = dir.join("pulls.json");
    if pulls.exists() {
        let records: Vec<PullRecord> =
            serde_json::from_str(&read_text(&pulls)?).map_err(|e| CliError::parse(&pulls, e))?;
        let total = template.rest_positions().len();
        for r in records {
            if r.vertex >= total {
                return Err(CliError::parse(
                    &pulls,
                    format!("vertex {} out of range ({total} vertices)", r.vertex),
                ));
            }
            template.pulls.push((r.vertex, Vec3::from(r.target)));
        }
    }
    Ok(template)
}

/// Staged output: every file is written to a temporary sibling first and
/// only renamed into place by [`Staged::commit`].
#[derive(Default)]
pub struct Staged {
    files: Vec<(PathBuf, tempfile::NamedTempFile)>,
}

impl Staged {
    pub fn add(&mut self, path: impl Into<PathBuf>, contents: &[u8]) -> CliResult<()> {
        use std::io::Write;
        let path = path.into();
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| CliError::io(&dir, e))?;
        tmp.write_all(contents).map_err(|e| CliError::io(&path, e))?;
        self.files.push((path, tmp));
        Ok(())
    }

    pub fn commit(self) -> CliResult<Vec<PathBuf>> {
        let mut written = Vec::new();
        for (path, tmp) in self.files {
            tmp.persist(&path).map_err(|e| CliError::io(&path, e.error))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Writes a single file atomically.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let mut staged = Staged::default();
    staged.add(path, contents)?;
    staged.commit().map(|_| ())
}
