use std::collections::BTreeMap;
use std::path::Path;

use eocloak::config::RunConfig;
use eocloak::optimizer::{COMPATIBILITY_TOL, CONDITION_LIMIT};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct SolverParams {
    pub nodes: usize,
    pub condition_limit: f64,
    pub compatibility_tol: f64,
}

/// Record written next to every set of outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    pub config_sha256: String,
    pub config: RunConfig,
    pub solver: SolverParams,
    pub outputs: Vec<String>,
    /// Wall-clock seconds per stage. The only field that varies between runs.
    pub timings: BTreeMap<String, f64>,
}

impl RunManifest {
    pub fn new(subcommand: &str, resolved: RunConfig) -> Result<Self, CliError> {
        let canonical = serde_json::to_string(&resolved).map_err(CliError::output)?;
        let digest = Sha256::digest(canonical.as_bytes());
        let config_sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
        let nodes = resolved.nodes.unwrap_or(eocloak::config::DEFAULT_NODES);
        Ok(Self {
            subcommand: subcommand.to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            config_sha256,
            config: resolved,
            solver: SolverParams { nodes, condition_limit: CONDITION_LIMIT, compatibility_tol: COMPATIBILITY_TOL },
            outputs: Vec::new(),
            timings: BTreeMap::new(),
        })
    }

    pub fn record(&mut self, file: &str) {
        self.outputs.push(file.to_owned());
    }

    pub fn time(&mut self, stage: &str, seconds: f64) {
        self.timings.insert(stage.to_owned(), seconds);
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let file = std::fs::File::create(dir.join(MANIFEST_FILE)).map_err(CliError::output)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), self).map_err(CliError::output)
    }
}
