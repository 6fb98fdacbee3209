//! Run manifests: tool version, config echo, seed, and per-output row counts.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    pub path: String,
    pub rows: usize,
}

/// One manifest per command invocation; every CSV the run produced is listed
/// exactly once.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub base_seed: u64,
    pub timestamp_unix: u64,
    pub config: C,
    pub outputs: Vec<OutputFile>,
}

impl<C: Serialize> RunManifest<C> {
    pub fn new(command: &'static str, base_seed: u64, config: C) -> Self {
        let timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            tool: "plateau-probe",
            version: env!("CARGO_PKG_VERSION"),
            command,
            base_seed,
            timestamp_unix,
            config,
            outputs: Vec::new(),
        }
    }

    pub fn add_output(&mut self, path: String, rows: usize) {
        self.outputs.push(OutputFile { path, rows });
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join("manifest.json");
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
