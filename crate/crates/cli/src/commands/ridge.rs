use std::path::PathBuf;

use clap::Args;
use serde_json::{json, Value};
use tetfit_core::ridge::{ridge, select_cylinder_vertices};
use tetfit_core::{Cylinder, Error, SurfaceMesh};

use super::Context;
use crate::error::{CliError, CliResult};
use crate::io::{read_obj, read_template, read_text, write_atomic};

#[derive(Debug, Args)]
pub struct RidgeArgs {
    /// Head surface (OBJ), or a template directory whose boundary is used.
    #[arg(long)]
    pub head: PathBuf,
    /// JSON array of `{start, end, radius?}` cylinders in meters.
    #[arg(long)]
    pub cylinders: PathBuf,
    /// Output JSON path.
    #[arg(long)]
    pub out: PathBuf,
}

fn skip_reason(err: &Error) -> String {
    match err {
        Error::RejectedCylinder { length, l_min } => format!("length < l_min ({length} m < {l_min} m)"),
        Error::DegenerateNormal => "degenerate plane normal: cylinder midpoint coincides with head mean".into(),
        other => other.to_string(),
    }
}

pub fn run(ctx: &Context, args: &RidgeArgs) -> CliResult<i32> {
    let head: SurfaceMesh = if args.head.is_dir() {
        read_template(&args.head)?.boundary().clone()
    } else {
        read_obj(&args.head)?
    };
    let text = read_text(&args.cylinders)?;
    let records: Vec<Value> = if text.trim().is_empty() {
        Vec::new()
    } else {
        serde_json::from_str(&text).map_err(|e| CliError::parse(&args.cylinders, e))?
    };

    let params = &ctx.config.params;
    let mut ridges = Vec::new();
    let mut skipped = Vec::new();
    for (i, mut record) in records.into_iter().enumerate() {
        if let Some(object) = record.as_object_mut() {
            object.entry("radius").or_insert(json!(params.cylinder_radius));
        }
        let outcome = serde_json::from_value::<Cylinder>(record)
            .map_err(|e| e.to_string())
            .and_then(|cylinder| {
                let indices = select_cylinder_vertices(&head, &cylinder);
                let targets = ridge(&indices, &head, &cylinder, params.l_min).map_err(|e| skip_reason(&e))?;
                if targets.entries.is_empty() {
                    return Err("no head vertices inside cylinder".to_string());
                }
                Ok(targets)
            });
        match outcome {
            Ok(targets) => {
                let mut value = serde_json::to_value(&targets).expect("ridge targets serialize");
                value["cylinder"] = json!(i);
                ctx.say(format!("cylinder {i}: {} targets", targets.entries.len()));
                ridges.push(value);
            }
            Err(reason) => {
                ctx.say(format!("cylinder {i}: skipped, {reason}"));
                skipped.push(json!({ "cylinder": i, "reason": reason }));
            }
        }
    }

    let output = json!({ "ridges": ridges, "skipped": skipped });
    write_atomic(
        &args.out,
        serde_json::to_string_pretty(&output).expect("json").as_bytes(),
    )?;
    if ridges.is_empty() {
        ctx.say("no cylinder produced ridge targets");
        return Ok(2);
    }
    Ok(0)
}
