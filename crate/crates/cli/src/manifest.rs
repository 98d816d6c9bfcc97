//! The one provenance record every invocation writes to stderr.

use std::path::Path;

use serde_json::{json, Map, Value};

#[derive(Debug, Default)]
pub struct Manifest {
    pub subcommand: String,
    pub inputs: Map<String, Value>,
    pub seed: u64,
    pub outcome: String,
}

impl Manifest {
    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_owned(), value.into());
    }

    /// Records a file argument by its resolved path.
    pub fn path(&mut self, key: &str, path: &Path) {
        let resolved = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
        self.input(key, resolved.display().to_string());
    }

    pub fn to_line(&self) -> String {
        json!({
            "manifest": {
                "subcommand": self.subcommand,
                "inputs": self.inputs,
                "seed": self.seed,
                "tool_version": env!("CARGO_PKG_VERSION"),
                "outcome_summary": self.outcome,
            }
        })
        .to_string()
    }
}
