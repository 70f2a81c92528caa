//! Run manifests: enough to reproduce a run's outputs byte for byte.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments as given, without the program name.
    pub argv: Vec<String>,
    pub seed: u64,
    /// Worker threads; 0 means all available cores. Outputs do not depend on it.
    pub jobs: usize,
    /// Resolved configuration with every default filled in.
    pub config: serde_json::Value,
    /// Output files, relative to the manifest's directory.
    pub outputs: Vec<String>,
    /// Command-specific results, e.g. the AUC of a localization run
    /// against ground truth from the input.
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub results: serde_json::Value,
}

impl RunManifest {
    pub fn new(command: &str, argv: &[String], seed: u64, jobs: usize, config: serde_json::Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            argv: argv.to_vec(),
            seed,
            jobs,
            config,
            outputs: Vec::new(),
            results: serde_json::Value::Null,
        }
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Schema {
            path: path.to_path_buf(),
            line: e.line() as u64,
            msg: e.to_string(),
        })
    }
}
