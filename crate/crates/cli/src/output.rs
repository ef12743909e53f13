//! JSON building, run manifests and artifact files.

use std::fs;
use std::path::Path;

use hyperwalk::numeric::{Exact, Rational};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, ErrorKind};

/// Version tag of every JSON document and manifest this tool writes.
pub const SCHEMA: &str = "hyperwalk/1";

/// A JSON object whose exact fields are fraction strings, each optionally
/// followed by a `<key>_decimal` companion.
pub struct Fields {
    map: Map<String, Value>,
    digits: Option<usize>,
}

impl Fields {
    pub fn new(digits: Option<usize>) -> Self {
        Fields {
            map: Map::new(),
            digits,
        }
    }

    pub fn exact(self, key: &str, value: &Rational) -> Self {
        let decimal = self.digits.map(|n| value.to_decimal_truncated(n));
        self.with_decimal(key, value.to_string(), decimal)
    }

    pub fn exact_value(self, key: &str, value: &Exact) -> Self {
        let decimal = self.digits.map(|n| value.to_decimal_truncated(n));
        self.with_decimal(key, value.to_string(), decimal)
    }

    pub fn exact_list(mut self, key: &str, values: &[Rational]) -> Self {
        self.map.insert(key.into(), json!(values));
        if let Some(n) = self.digits {
            let decimals: Vec<String> = values.iter().map(|v| v.to_decimal_truncated(n)).collect();
            self.map.insert(format!("{key}_decimal"), json!(decimals));
        }
        self
    }

    pub fn put(mut self, key: &str, value: impl Serialize) -> Self {
        self.map.insert(key.into(), json!(value));
        self
    }

    pub fn build(self) -> Value {
        Value::Object(self.map)
    }

    fn with_decimal(mut self, key: &str, exact: String, decimal: Option<String>) -> Self {
        self.map.insert(key.into(), Value::String(exact));
        if let Some(d) = decimal {
            self.map.insert(format!("{key}_decimal"), Value::String(d));
        }
        self
    }
}

/// Provenance record embedded in every output file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub config: Option<String>,
    pub seed: Option<u64>,
    pub version: &'static str,
    /// `sha256:` of the file body.
    pub checksum: String,
}

impl RunManifest {
    pub fn new(command: &[String], config: Option<&str>, seed: Option<u64>, body: &[u8]) -> Self {
        RunManifest {
            schema: SCHEMA,
            command: command.to_vec(),
            config: config.map(str::to_owned),
            seed,
            version: env!("CARGO_PKG_VERSION"),
            checksum: format!("sha256:{}", hex::encode(Sha256::digest(body))),
        }
    }
}

/// Writes `{"schema", "manifest", "result"}`; the checksum covers the
/// compact serialization of `result`.
pub fn write_json_artifact(path: &Path, command: &[String], config: Option<&str>, seed: Option<u64>, result: &Value) -> Result<RunManifest, CliError> {
    let body = serde_json::to_string(result).map_err(|e| CliError::new(ErrorKind::Internal, e.to_string()))?;
    let manifest = RunManifest::new(command, config, seed, body.as_bytes());
    let doc = json!({ "schema": SCHEMA, "manifest": manifest, "result": result });
    let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::new(ErrorKind::Internal, e.to_string()))?;
    write_file(path, &format!("{text}\n"))?;
    Ok(manifest)
}

/// Writes the CSV `body` below a `# manifest: {...}` comment line.
pub fn write_csv_artifact(path: &Path, command: &[String], config: Option<&str>, seed: Option<u64>, body: &str) -> Result<RunManifest, CliError> {
    let manifest = RunManifest::new(command, config, seed, body.as_bytes());
    let header = serde_json::to_string(&manifest).map_err(|e| CliError::new(ErrorKind::Internal, e.to_string()))?;
    write_file(path, &format!("# manifest: {header}\n{body}"))?;
    Ok(manifest)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::new(ErrorKind::Io, format!("cannot write {}: {e}", path.display())))
}
