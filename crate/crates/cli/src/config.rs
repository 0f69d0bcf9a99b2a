//! Run configuration: weights, solver parameters and default paths.
//!
//! Configs are JSON. Missing keys take their defaults and unknown keys are
//! rejected. `--set section.key=value` overrides are applied to the JSON
//! before it is decoded, so they obey the same rules.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use tetfit_core::{SolverParams, Weights};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub template_dir: Option<PathBuf>,
    pub target: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub weights: Weights,
    pub params: SolverParams,
    pub paths: Paths,
}

impl Config {
    /// Reads `file` (if any), applies `overrides` and validates the result.
    pub fn resolve(file: Option<&Path>, overrides: &[String]) -> CliResult<Self> {
        let mut value = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                serde_json::from_str(&text).map_err(|e| CliError::parse(path, e))?
            }
            None => Value::Object(Map::new()),
        };
        for item in overrides {
            apply_override(&mut value, item)?;
        }
        Self::from_value(value)
    }

    pub fn from_value(value: Value) -> CliResult<Self> {
        let config: Config = serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))?;
        config.weights.validate()?;
        config.params.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Applies one `dotted.key=value` override. The value is read as JSON when
/// it parses, and as a string otherwise.
pub fn apply_override(root: &mut Value, item: &str) -> CliResult<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {item:?}")))?;
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Usage(format!("malformed key {key:?}")));
    }
    let parsed = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));

    let mut node = root;
    for part in &parts[..parts.len() - 1] {
        let object = node
            .as_object_mut()
            .ok_or_else(|| CliError::Config(format!("{key}: {part} is not inside an object")))?;
        node = object
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
    }
    node.as_object_mut()
        .ok_or_else(|| CliError::Config(format!("{key}: parent is not an object")))?
        .insert(parts[parts.len() - 1].to_string(), parsed);
    Ok(())
}
