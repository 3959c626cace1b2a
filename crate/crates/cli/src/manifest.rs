use std::path::Path;

use anyhow::Result;
use serde::Serialize;

/// Reproducibility record written next to every output: rerunning the same
/// subcommand with the parameters in here reproduces the outputs byte for
/// byte, seeded noise included.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub parameters: serde_json::Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
}

impl RunManifest {
    pub fn new(subcommand: &str, parameters: serde_json::Value) -> Self {
        RunManifest {
            tool: "echotopo",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            parameters,
            inputs: Vec::new(),
            outputs: Vec::new(),
            rng_seed: None,
        }
    }

    pub fn input(mut self, path: &Path) -> Self {
        self.inputs.push(path.display().to_string());
        self
    }

    pub fn output(mut self, path: &Path) -> Self {
        self.outputs.push(path.display().to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.rng_seed = Some(seed);
        self
    }

    /// Writes `<primary_output>.manifest.json`, or `manifest.json` inside a
    /// directory output.
    pub fn write(&self, primary_output: &Path) -> Result<()> {
        let path = if primary_output.is_dir() {
            primary_output.join("manifest.json")
        } else {
            let mut name = primary_output.file_name().unwrap_or_default().to_os_string();
            name.push(".manifest.json");
            primary_output.with_file_name(name)
        };
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        echotopo_core::io::write_text(&path, &text)?;
        Ok(())
    }
}
