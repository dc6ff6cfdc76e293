use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// Written next to every output file as `<out>.manifest.json`. Contains no
/// timestamps or host data, so identical runs give identical bytes.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    pub tool_version: String,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub diagnostics: Value,
}

impl RunManifest {
    pub fn new(command: &str, config: Value, out: &Path, diagnostics: Value) -> Self {
        Self {
            command: command.to_string(),
            config,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: vec![out.display().to_string()],
            diagnostics,
        }
    }

    pub fn path_for(out: &Path) -> PathBuf {
        let mut s = out.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }
}
