//! File formats: per-step CSV / JSON-lines, run metadata and output manifests.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::PriceSeries;
use crate::config::GameConfig;
use crate::engine::StepRecord;
use crate::error::{Error, Result};

/// Header of the per-step CSV.
pub const RECORD_HEADER: [&str; 7] = [
    "t",
    "price",
    "dp",
    "imbalance",
    "perturbation",
    "h",
    "volume",
];

/// Version string recorded in metadata and manifests.
pub fn version_string() -> String {
    format!("specgame v{}", env!("CARGO_PKG_VERSION"))
}

pub fn write_records_csv<W: Write>(writer: W, records: &[StepRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    w.write_record(RECORD_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn write_records_jsonl<W: Write>(mut writer: W, records: &[StepRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut writer, r)?;
        writer
            .write_all(b"\n")
            .map_err(|e| Error::io("<jsonl>", e))?;
    }
    writer.flush().map_err(|e| Error::io("<jsonl>", e))
}

/// Parses the per-step CSV, rejecting wrong headers and malformed rows with
/// the 1-based line number.
pub fn read_records_csv<R: std::io::Read>(reader: R) -> Result<Vec<StepRecord>> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers().map_err(|e| parse_error(1, e))?.clone();
    if header.iter().ne(RECORD_HEADER.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {}", RECORD_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, row) in r.deserialize::<StepRecord>().enumerate() {
        out.push(row.map_err(|e| parse_error(i + 2, e))?);
    }
    Ok(out)
}

pub fn read_records_jsonl<R: std::io::Read>(reader: R) -> Result<Vec<StepRecord>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| Error::io("<jsonl>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

fn parse_error(fallback_line: usize, e: csv::Error) -> Error {
    let line = e
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or(fallback_line);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

/// Rebuilds `p(0), ..., p(T)` from step records; `p(0) = price(1) - dp(1)`.
pub fn series_from_records(records: &[StepRecord]) -> PriceSeries {
    let Some(first) = records.first() else {
        return PriceSeries::default();
    };
    let mut prices = Vec::with_capacity(records.len() + 1);
    prices.push(first.price - first.price_change);
    prices.extend(records.iter().map(|r| r.price));
    PriceSeries {
        prices,
        volume: Some(records.iter().map(|r| r.traded_volume).collect()),
    }
}

/// Sidecar describing a single simulation output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub version: String,
    pub config: GameConfig,
    pub config_hash: String,
    pub rng_seed: u64,
    pub steps: usize,
    pub warnings: Vec<String>,
}

impl RunMetadata {
    pub fn new(config: &GameConfig, steps: usize) -> Self {
        Self {
            version: version_string(),
            config: config.clone(),
            config_hash: config.hash(),
            rng_seed: config.rng_seed,
            steps,
            warnings: config.warnings(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Index of an output directory: what produced it and what it contains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub command: String,
    pub config_hash: String,
    pub parameters: serde_json::Value,
    pub seeds: Vec<u64>,
    pub files: Vec<ManifestEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

impl Manifest {
    /// Hashes `files` (relative to `dir`) and writes `manifest.json`.
    pub fn write(
        dir: &Path,
        command: &str,
        parameters: serde_json::Value,
        seeds: Vec<u64>,
        files: &[String],
    ) -> Result<Manifest> {
        let files = files
            .iter()
            .map(|name| {
                let path = dir.join(name);
                let data = fs::read(&path).map_err(|e| Error::io(&path, e))?;
                Ok(ManifestEntry {
                    path: name.clone(),
                    bytes: data.len() as u64,
                    sha256: hex::encode(Sha256::digest(&data)),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let manifest = Manifest {
            version: version_string(),
            command: command.to_string(),
            config_hash: crate::config::config_hash(&parameters),
            parameters,
            seeds,
            files,
        };
        write_json(&dir.join(MANIFEST_FILE), &manifest)?;
        Ok(manifest)
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn create_file(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub fn open_file(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create_file(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes rows of displayable cells under `header`.
pub fn write_table<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: ToString,
{
    let mut w = csv::Writer::from_writer(create_file(path)?);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.into_iter().map(|c| c.to_string()))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn output_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
