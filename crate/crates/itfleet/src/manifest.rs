//! `manifest.json`: what produced an output directory, and from what.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Record of one command run. Apart from `duration_seconds`, identical
/// inputs and flags give an identical manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    /// Flag values that shape the output, in flag-name order.
    pub parameters: BTreeMap<String, String>,
    pub inputs: Vec<FileDigest>,
    pub seeds: BTreeMap<String, u64>,
    /// Output files relative to the output directory, with their digests.
    pub outputs: Vec<FileDigest>,
    pub duration_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            parameters: BTreeMap::new(),
            inputs: Vec::new(),
            seeds: BTreeMap::new(),
            outputs: Vec::new(),
            duration_seconds: 0.0,
        }
    }

    pub fn parameter(&mut self, name: &str, value: impl ToString) {
        self.parameters.insert(name.into(), value.to_string());
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(FileDigest { path: path.display().to_string(), sha256: sha256_hex(bytes) });
    }

    /// Writes `bytes` to `dir/relative` and records it.
    pub fn write_output(&mut self, dir: &Path, relative: &str, bytes: &[u8]) -> Result<()> {
        let path = dir.join(relative);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(Error::io(parent))?;
        }
        std::fs::write(&path, bytes).map_err(Error::io(&path))?;
        self.outputs.push(FileDigest { path: relative.into(), sha256: sha256_hex(bytes) });
        Ok(())
    }

    pub fn finish(mut self, dir: &Path, elapsed: Duration) -> Result<RunManifest> {
        self.duration_seconds = elapsed.as_secs_f64();
        let text = serde_json::to_vec_pretty(&self).expect("manifest serialises");
        let path = dir.join(MANIFEST_FILE);
        std::fs::write(&path, text).map_err(Error::io(&path))?;
        Ok(self)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
