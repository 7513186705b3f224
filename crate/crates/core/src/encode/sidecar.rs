//! JSON sidecars written next to every output artifact.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Reproducibility record: the fully resolved configuration plus the files
/// read and written for one artifact group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar<C> {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: C,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<usize>,
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
    #[serde(default)]
    pub outputs: Vec<PathBuf>,
}

impl<C: Serialize> Sidecar<C> {
    pub fn new(command: &str, config: C) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            pair: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}
