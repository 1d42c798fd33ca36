//! Output bookkeeping: every file a subcommand writes, its stdout and the
//! fields it touched end up in a manifest next to the outputs.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use agcodes::FieldSpec;
use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const OUT_DIR_ENV: &str = "AGCODES_OUT_DIR";

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct ReductionRecord {
    pub m: u32,
    pub q: u32,
    pub polynomial: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub args: Vec<String>,
    pub version: String,
    pub reduction_polynomials: Vec<ReductionRecord>,
    pub elapsed_ms: u128,
    pub outputs: Vec<OutputRecord>,
    pub stdout_sha256: String,
}

pub struct Run {
    subcommand: String,
    args: Vec<String>,
    out_dir: PathBuf,
    fields: BTreeSet<u32>,
    outputs: Vec<OutputRecord>,
    stdout: String,
    started: Instant,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Run {
    pub fn new(subcommand: &str, args: Vec<String>) -> Result<Self> {
        let out_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&out_dir).with_context(|| format!("creating output directory {}", out_dir.display()))?;
        Ok(Run {
            subcommand: subcommand.to_string(),
            args,
            out_dir,
            fields: BTreeSet::new(),
            outputs: Vec::new(),
            stdout: String::new(),
            started: Instant::now(),
        })
    }

    pub fn field(&mut self, m: u32) -> Result<FieldSpec> {
        let f = FieldSpec::cached(m).with_context(|| format!("building GF(2^{m})"))?;
        self.fields.insert(m);
        Ok(f)
    }

    pub fn note_field(&mut self, m: u32) {
        self.fields.insert(m);
    }

    pub fn say(&mut self, line: impl AsRef<str>) {
        self.stdout.push_str(line.as_ref());
        if !line.as_ref().ends_with('\n') {
            self.stdout.push('\n');
        }
    }

    /// Where an output named on the command line goes: relative paths land
    /// in the output directory.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.out_dir.join(path)
        }
    }

    pub fn write(&mut self, path: &Path, contents: &[u8]) -> Result<()> {
        let target = self.resolve(path);
        if let Some(parent) = target.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&target, contents).with_context(|| format!("writing {}", target.display()))?;
        self.record(path)
    }

    /// Adds a file written elsewhere (by the library) to the manifest.
    pub fn record(&mut self, path: &Path) -> Result<()> {
        let target = self.resolve(path);
        let bytes = fs::read(&target).with_context(|| format!("reading back {}", target.display()))?;
        self.outputs.retain(|o| o.path != path.display().to_string());
        self.outputs.push(OutputRecord {
            path: path.display().to_string(),
            bytes: bytes.len() as u64,
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    pub fn finish(self) -> Result<()> {
        print!("{}", self.stdout);
        let reduction_polynomials = self
            .fields
            .iter()
            .map(|&m| {
                let f = FieldSpec::cached(m)?;
                Ok(ReductionRecord { m, q: f.q(), polynomial: f.reduction_string() })
            })
            .collect::<agcodes::Result<Vec<_>>>()?;
        let manifest = RunManifest {
            subcommand: self.subcommand.clone(),
            args: self.args,
            version: env!("CARGO_PKG_VERSION").to_string(),
            reduction_polynomials,
            elapsed_ms: self.started.elapsed().as_millis(),
            outputs: self.outputs,
            stdout_sha256: sha256_hex(self.stdout.as_bytes()),
        };
        let path = self.out_dir.join(format!("{}.manifest.json", self.subcommand));
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
