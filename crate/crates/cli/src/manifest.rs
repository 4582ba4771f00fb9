use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// Everything needed to reproduce a run. Contains no timestamps so that
/// reruns write identical files.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub program: Option<String>,
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compile: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<serde_json::Value>,
    pub settings: BTreeMap<String, serde_json::Value>,
    pub output_dir: PathBuf,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &'static str, output_dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(output_dir).with_context(|| format!("creating {}", output_dir.display()))?;
        let output_dir = output_dir.canonicalize().with_context(|| format!("resolving {}", output_dir.display()))?;
        Ok(Self {
            tool: "crnpp",
            version: env!("CARGO_PKG_VERSION"),
            command,
            program: None,
            parameters: BTreeMap::new(),
            backend: None,
            compile: None,
            solver: None,
            settings: BTreeMap::new(),
            output_dir,
            outputs: Vec::new(),
        })
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.settings.insert(key.to_string(), serde_json::to_value(value).expect("setting serializes"));
    }

    /// Writes `contents` to `<output_dir>/<name>` and records it.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.output_dir.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    pub fn finish(self) -> Result<()> {
        let path = self.output_dir.join("manifest.json");
        let json = serde_json::to_string_pretty(&self)? + "\n";
        std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))
    }
}
