// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Serialize)]
struct Provenance<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    arguments: Vec<String>,
    rng_seed: u64,
    config: &'a serde_json::Value,
    inputs: &'a [InputDigest],
    outputs: &'a [String],
}

/// An output directory that tracks what was read and written, for the
/// provenance record.
pub struct OutputDir {
    root: PathBuf,
    inputs: Vec<InputDigest>,
    outputs: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating output directory {}", root.display()))?;
        Ok(OutputDir { root: root.to_path_buf(), inputs: Vec::new(), outputs: Vec::new() })
    }

    /// Read an input file as text and record its digest.
    pub fn read_input(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            bytes: bytes.len(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8 text", path.display()))
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_vec_pretty(value)?;
        text.push(b'\n');
        self.write_bytes(name, &text)
    }

    pub fn write_csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("csv buffer: {e}"))?;
        self.write_bytes(name, &bytes)
    }

    /// Write `provenance.json`; call after every other output succeeded.
    pub fn finish<C: Serialize>(mut self, command: &str, config: &C, rng_seed: u64) -> Result<()> {
        let config = serde_json::to_value(config)?;
        let outputs = self.outputs.clone();
        let inputs = self.inputs.clone();
        let record = Provenance {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            arguments: std::env::args().skip(1).collect(),
            rng_seed,
            config: &config,
            inputs: &inputs,
            outputs: &outputs,
        };
        self.write_json("provenance.json", &record)
    }
}

/// Format an optional number for CSV, empty when absent.
pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
