//! Data files with an embedded run manifest.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub struct Manifest {
    pub subcommand: &'static str,
    pub params: Value,
    pub extras: Map<String, Value>,
}

impl Manifest {
    pub fn new(subcommand: &'static str, params: Value) -> Self {
        Self { subcommand, params, extras: Map::new() }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.extras.insert(key.to_string(), value);
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Shortest round-trip decimal form.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else if x.is_finite() {
        format!("{x:e}")
    } else {
        "nan".to_string()
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// CSV with `# key: value` manifest lines; the checksum covers header and rows.
pub fn write_csv(out: Option<&Path>, m: &Manifest, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut body = header.join(",");
    body.push('\n');
    for r in rows {
        body.push_str(&r.join(","));
        body.push('\n');
    }
    let mut text = format!("# fraclat {}\n# subcommand: {}\n", env!("CARGO_PKG_VERSION"), m.subcommand);
    text.push_str(&format!("# params: {}\n", m.params));
    for (k, v) in &m.extras {
        text.push_str(&format!("# {k}: {v}\n"));
    }
    text.push_str(&format!("# sha256: {}\n", sha256_hex(body.as_bytes())));
    text.push_str(&body);
    emit(out, &text)
}

/// JSON document `{manifest, data}`; the checksum covers the compact `data` text.
pub fn write_json(out: Option<&Path>, m: &Manifest, data: Value) -> Result<(), CliError> {
    let compact = serde_json::to_string(&data).map_err(|e| CliError::Io(e.to_string()))?;
    let mut manifest = json!({
        "tool": "fraclat",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": m.subcommand,
        "params": m.params,
    });
    let obj = manifest.as_object_mut().expect("object literal");
    for (k, v) in &m.extras {
        obj.insert(k.clone(), v.clone());
    }
    obj.insert("sha256".into(), Value::String(sha256_hex(compact.as_bytes())));
    let doc = json!({ "manifest": manifest, "data": data });
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    emit(out, &text)
}
