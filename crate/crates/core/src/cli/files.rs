use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::settings::RunConfig;
use crate::error::Result;

/// Floats are written with 17 significant digits, enough to round-trip.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// A CSV cell; `None` is written as an empty field.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Writes `bytes` to `path` through a sibling temporary file and a rename,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Parses a CSV produced by [`csv_string`]; empty cells become `None`.
pub fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut lines = text.lines();
    let header = lines.next().map(|h| h.split(',').map(str::to_owned).collect()).unwrap_or_default();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(|c| c.trim().parse::<f64>().ok()).collect())
        .collect();
    (header, rows)
}

/// Output directory that records every file written into it.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(Self { root, written: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Paths written so far, relative to the root.
    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn write(&mut self, rel: impl AsRef<Path>, bytes: &[u8]) -> Result<PathBuf> {
        let rel = rel.as_ref().to_path_buf();
        let path = self.root.join(&rel);
        write_atomic(&path, bytes)?;
        if !self.written.contains(&rel) {
            self.written.push(rel);
        }
        Ok(path)
    }

    pub fn write_csv(&mut self, rel: impl AsRef<Path>, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf> {
        self.write(rel, csv_string(header, rows).as_bytes())
    }

    pub fn write_json<T: Serialize>(&mut self, rel: impl AsRef<Path>, value: &T) -> Result<PathBuf> {
        let text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
        self.write(rel, text.as_bytes())
    }

    /// Writes `manifest.json` listing every output, itself included.
    pub fn finish(mut self, command: &str, config: &RunConfig) -> Result<RunManifest> {
        let rel = PathBuf::from(MANIFEST_NAME);
        if !self.written.contains(&rel) {
            self.written.push(rel.clone());
        }
        let manifest = RunManifest {
            command: command.to_owned(),
            config: config.clone(),
            outputs: self.written.clone(),
            versions: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            seed: config.simulation.rng_seed,
        };
        self.write_json(&rel, &manifest)?;
        Ok(manifest)
    }
}

pub const MANIFEST_NAME: &str = "manifest.json";

/// Record of one command invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: RunConfig,
    /// Paths relative to the output directory.
    pub outputs: Vec<PathBuf>,
    pub versions: String,
    pub seed: u64,
}
