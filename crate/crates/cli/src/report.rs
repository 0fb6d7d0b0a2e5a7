use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use powerbeam::raster::write_atomic;
use powerbeam::Error;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Self-contained record of one run.
#[derive(Debug, Serialize)]
pub struct RunReport<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: RunConfig,
    pub inputs: Vec<InputDigest>,
    pub timings_ms: BTreeMap<&'static str, f64>,
    pub outcome: T,
}

impl<T: Serialize> RunReport<T> {
    pub fn new(command: &'static str, config: RunConfig, outcome: T) -> Self {
        Self {
            tool: "powerbeam",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            inputs: Vec::new(),
            timings_ms: BTreeMap::new(),
            outcome,
        }
    }
}

pub fn digest(path: &Path) -> Result<InputDigest, Error> {
    let bytes = std::fs::read(path).map_err(|e| Error::Argument(format!("{}: {e}", path.display())))?;
    let hash = Sha256::digest(&bytes);
    Ok(InputDigest {
        path: path.to_path_buf(),
        sha256: hash.iter().map(|b| format!("{b:02x}")).collect(),
    })
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Writes `rows` under a fixed header, atomically.
pub fn write_csv<R: Serialize>(path: &Path, header: &[&str], rows: &[R]) -> Result<(), Error> {
    let csv_err = |e: csv::Error| Error::Argument(format!("{}: {e}", path.display()));
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Argument(e.to_string()))?;
    write_atomic(path, &bytes)
}
