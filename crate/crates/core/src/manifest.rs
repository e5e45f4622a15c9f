//! Run manifests: what was run, with which seed and budgets, on which input
//! bytes, producing which output bytes.
//!
//! Thread count is deliberately absent and wall-clock timing is opt-in, so
//! two runs of the same command produce byte-identical manifests.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const TOOL: &str = "unital-iso";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileHash {
    /// Path as given on the command line; `-` for standard output.
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Arguments after the program name, without run-environment flags.
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub budgets: BTreeMap<String, u64>,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
    /// Milliseconds; only recorded on request.
    pub timing_ms: Option<u64>,
}

impl RunManifest {
    pub fn new(command: Vec<String>) -> Self {
        RunManifest {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            ..Default::default()
        }
    }

    pub fn record_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(FileHash { path: path.display().to_string(), sha256: sha256_hex(bytes) });
    }

    pub fn record_output(&mut self, path: &str, bytes: &[u8]) {
        self.outputs.push(FileHash { path: path.into(), sha256: sha256_hex(bytes) });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut m = RunManifest::new(vec!["construct".into(), "order2".into()]);
        m.seed = Some(3);
        m.budgets.insert("restarts".into(), 64);
        m.record_output("-", b"abc");
        assert_eq!(m.outputs[0].sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        assert_eq!(RunManifest::from_json(&m.to_json()).unwrap(), m);
    }
}
