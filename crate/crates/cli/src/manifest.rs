use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Result;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Written once per output directory, after every data file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: &'static str,
    pub config: serde_json::Value,
    /// SHA-256 over the command and its config.
    pub input_hash: String,
    pub outputs: Vec<String>,
    pub wall_seconds: f64,
}

pub struct ManifestBuilder {
    command: String,
    config: serde_json::Value,
    hasher: Sha256,
    outputs: Vec<String>,
    start: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str, config: &impl Serialize) -> Result<Self> {
        let config = serde_json::to_value(config)?;
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        hasher.update(serde_json::to_vec(&config)?);
        Ok(Self { command: command.into(), config, hasher, outputs: Vec::new(), start: Instant::now() })
    }

    pub fn output(&mut self, path: impl Into<PathBuf>) {
        let path = path.into();
        self.outputs.push(path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into()));
    }

    pub fn write(self, dir: &Path) -> Result<()> {
        let digest = self.hasher.finalize();
        let manifest = RunManifest {
            command: self.command,
            version: env!("CARGO_PKG_VERSION"),
            config: self.config,
            input_hash: digest.iter().map(|b| format!("{b:02x}")).collect(),
            outputs: self.outputs,
            wall_seconds: self.start.elapsed().as_secs_f64(),
        };
        fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
        Ok(())
    }
}
