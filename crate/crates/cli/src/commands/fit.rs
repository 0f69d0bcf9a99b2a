use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::Value;
use tetfit_core::mesh::{write_obj, write_tetgen};
use tetfit_core::ridge::RidgeEntry;
use tetfit_core::solver::fit;
use tetfit_core::RidgeTargets;

use super::Context;
use crate::error::{CliError, CliResult};
use crate::io::{read_obj, read_template, read_text, Staged};

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Target surface (OBJ). Overrides `paths.target`.
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Template directory with `tet-S.node/.ele` and optional extras.
    /// Overrides `paths.template_dir`.
    #[arg(long)]
    pub template_dir: Option<PathBuf>,
    /// Output directory. Overrides `paths.output_dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Ridge targets produced by `tetfit ridge`, indexed on the template
    /// boundary.
    #[arg(long)]
    pub ridge: Option<PathBuf>,
}

fn required(flag: Option<&PathBuf>, config: Option<&PathBuf>, what: &str) -> CliResult<PathBuf> {
    flag.or(config)
        .cloned()
        .ok_or_else(|| CliError::Usage(format!("no {what} given (flag or config paths)")))
}

fn require_file(path: &Path, what: &str) -> CliResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what} {} does not exist", path.display())))
    }
}

/// Reads the output of `tetfit ridge` (all ridges merged) or a single
/// ridge-target record.
pub fn read_ridge_targets(path: &Path) -> CliResult<RidgeTargets> {
    let value: Value = serde_json::from_str(&read_text(path)?).map_err(|e| CliError::parse(path, e))?;
    let Some(ridges) = value.get("ridges").and_then(Value::as_array) else {
        return serde_json::from_value(value).map_err(|e| CliError::parse(path, e));
    };
    let mut merged: Option<RidgeTargets> = None;
    for ridge in ridges {
        let mut record = ridge.clone();
        if let Some(object) = record.as_object_mut() {
            object.remove("cylinder");
        }
        let targets: RidgeTargets = serde_json::from_value(record).map_err(|e| CliError::parse(path, e))?;
        match &mut merged {
            Some(all) => all.entries.extend::<Vec<RidgeEntry>>(targets.entries),
            None => merged = Some(targets),
        }
    }
    merged.ok_or_else(|| CliError::parse(path, "no ridges in file"))
}

pub fn run(ctx: &Context, args: &FitArgs) -> CliResult<i32> {
    let paths = &ctx.config.paths;
    let target_path = required(args.target.as_ref(), paths.target.as_ref(), "target")?;
    let template_dir = required(
        args.template_dir.as_ref(),
        paths.template_dir.as_ref(),
        "template directory",
    )?;
    let out = required(args.out.as_ref(), paths.output_dir.as_ref(), "output directory")?;
    require_file(&target_path, "target")?;
    if let Some(ridge) = &args.ridge {
        require_file(ridge, "ridge file")?;
    }

    let target = read_obj(&target_path)?;
    let template = read_template(&template_dir)?;
    let ridge = args.ridge.as_deref().map(read_ridge_targets).transpose()?;

    log::info!(
        "fitting {} template vertices to {} ({} faces)",
        template.rest_positions().len(),
        target_path.display(),
        target.face_count()
    );
    let result = fit(
        &template,
        &target,
        ridge.as_ref(),
        &ctx.config.weights,
        &ctx.config.params,
    )?;

    let mut staged = Staged::default();
    for (component, mesh) in template.fitted_components(&result.state.q)? {
        let (node, ele) = write_tetgen(&mesh);
        let stem = out.join(component.file_stem());
        staged.add(stem.with_extension("node"), node.as_bytes())?;
        staged.add(stem.with_extension("ele"), ele.as_bytes())?;
    }
    staged.add(
        out.join("fitted-boundary.obj"),
        write_obj(&template.fitted_boundary(&result.state.q)?).as_bytes(),
    )?;
    staged.add(out.join("report.json"), result.report_json().as_bytes())?;
    staged.add(out.join("config.json"), ctx.config.to_json().as_bytes())?;
    staged.commit()?;

    ctx.say(format!(
        "{} after {} outer iterations; mean surface distance {:.3e} -> {:.3e} m; wrote {}",
        if result.converged { "converged" } else { "not converged" },
        result.reports.len(),
        result.initial_mean_surface_dist,
        result.final_mean_surface_dist(),
        out.display()
    ));
    Ok(if result.converged { 0 } else { 2 })
}
