use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;

/// Provenance record written next to every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Arguments after the program name.
    pub command_line: Vec<String>,
    /// Every setting that determines the output, defaults included.
    pub resolved_config: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub version: String,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(command_line: Vec<String>, resolved_config: BTreeMap<String, String>, seed: Option<u64>) -> Self {
        Self {
            command_line,
            resolved_config,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_seconds: 0.0,
        }
    }

    /// `<output>.manifest.json`
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_os_string();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write(&self, output: &Path) -> Result<PathBuf, CliError> {
        let path = Self::path_for(output);
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Internal(format!("manifest serialization: {e}")))?;
        std::fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse {
            line: e.line(),
            field: "manifest".into(),
            message: e.to_string(),
        })
    }

    /// The recorded command line with its `--out` value replaced.
    pub fn command_with_output(&self, out: &Path) -> Vec<String> {
        let mut args = Vec::with_capacity(self.command_line.len() + 2);
        let mut it = self.command_line.iter();
        let mut replaced = false;
        while let Some(a) = it.next() {
            if a == "--out" {
                it.next();
                args.push(a.clone());
                args.push(out.display().to_string());
                replaced = true;
            } else if a.starts_with("--out=") {
                args.push(format!("--out={}", out.display()));
                replaced = true;
            } else {
                args.push(a.clone());
            }
        }
        if !replaced {
            args.push("--out".into());
            args.push(out.display().to_string());
        }
        args
    }
}
