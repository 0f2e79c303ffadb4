use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Provenance written next to every output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub flags: serde_json::Value,
    pub seeds: BTreeMap<String, u64>,
    /// Input path to SHA-256 hex digest.
    pub input_hashes: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, flags: serde_json::Value) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            flags,
            seeds: BTreeMap::new(),
            input_hashes: BTreeMap::new(),
            outputs: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn seed(&mut self, name: &str, value: u64) {
        self.seeds.insert(name.to_string(), value);
    }

    /// Reads `path`, records its hash, and returns the bytes.
    pub fn read_input(&mut self, path: &Path) -> Result<Vec<u8>> {
        let data = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.input_hashes
            .insert(path.display().to_string(), sha256_hex(&data));
        Ok(data)
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Writes the manifest to `path`, or to stderr when there is none.
    pub fn write(&self, path: Option<&Path>) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        match path {
            Some(p) => fs::write(p, json + "\n")
                .with_context(|| format!("writing manifest {}", p.display())),
            None => {
                eprintln!("{json}");
                Ok(())
            }
        }
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// `<out>.manifest.json` unless overridden.
pub fn sidecar(out: Option<&Path>, explicit: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| {
        out.map(|o| {
            let mut s = o.as_os_str().to_owned();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    })
}
