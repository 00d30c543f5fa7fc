use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

/// Everything needed to rerun a command: `argv` replays it exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub versions: BTreeMap<String, String>,
    /// SHA-256 of every input file, by path.
    pub input_digests: BTreeMap<String, String>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(command: &str, argv: Vec<String>, parameters: serde_json::Value, seed: u64, input_digests: BTreeMap<String, String>) -> Self {
        let versions = BTreeMap::from([("ordturan".to_string(), env!("CARGO_PKG_VERSION").to_string())]);
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self { command: command.into(), argv, parameters, seed, versions, input_digests, timestamp }
    }
}
