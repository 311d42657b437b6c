use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::report::Report;
use super::spec::OutputFormat;
use crate::error::{Error, Result};

#[derive(Serialize)]
struct ManifestEntry {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    name: &'a str,
    experiment: Option<&'static str>,
    seed: u64,
    config_sha256: &'a str,
    passed: bool,
    files: Vec<ManifestEntry>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn write(dir: &Path, name: &str, bytes: &[u8], written: &mut Vec<(PathBuf, String)>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    written.push((path, sha256_hex(bytes)));
    Ok(())
}

/// Writes the report into `dir` and returns the paths written.
///
/// CSV tables go to `<stem>.csv`, the JSON mirror to `<name>.json`, rasters
/// to `<name>_n<n>.pgm` with a JSON sidecar, and `MANIFEST.json` lists
/// every file with its SHA-256, the config hash, seed and tool version.
/// An empty report writes the manifest only. Output is byte-identical for
/// identical reports.
pub fn emit(report: &Report, formats: &[OutputFormat], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    if !report.is_empty() {
        if formats.contains(&OutputFormat::Csv) {
            for t in &report.tables {
                write(
                    dir,
                    &format!("{}.csv", t.stem),
                    t.to_csv().as_bytes(),
                    &mut written,
                )?;
            }
        }
        if formats.contains(&OutputFormat::Json) {
            let mut text = serde_json::to_string_pretty(&report.to_json())?;
            text.push('\n');
            write(
                dir,
                &format!("{}.json", report.name),
                text.as_bytes(),
                &mut written,
            )?;
        }
        if formats.contains(&OutputFormat::Pgm) {
            for (n, r) in &report.rasters {
                let path = dir.join(format!("{}_n{n}.pgm", report.name));
                r.save(&path)?;
                for p in [path.clone(), path.with_extension("json")] {
                    let bytes = std::fs::read(&p).map_err(|e| Error::io(&p, e))?;
                    written.push((p, sha256_hex(&bytes)));
                }
            }
        }
    }
    let manifest = Manifest {
        tool: "fekete-dyn",
        version: env!("CARGO_PKG_VERSION"),
        name: &report.name,
        experiment: report.experiment.map(|k| k.name()),
        seed: report.seed,
        config_sha256: &report.config_hash,
        passed: report.passed(),
        files: written
            .iter()
            .map(|(p, h)| ManifestEntry {
                path: p.file_name().unwrap().to_string_lossy().into_owned(),
                sha256: h.clone(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    let mut paths: Vec<PathBuf> = written.into_iter().map(|(p, _)| p).collect();
    let path = dir.join("MANIFEST.json");
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    paths.push(path);
    Ok(paths)
}
