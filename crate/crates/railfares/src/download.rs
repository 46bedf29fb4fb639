//! Fetches configured remote inputs and verifies their checksums.
//!
//! The download list is a small CSV (`name,url,destination,expected_hash`)
//! rather than code, so operators can point a deployment at mirrored feed
//! archives without rebuilding. Files whose on-disk checksum already matches
//! the configured hash are skipped.

use std::io::Read;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, ErrorReport, Result};
use crate::export::atomic_write;

/// One configured remote input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownloadEntry {
    pub name: String,
    pub url: String,
    pub destination: PathBuf,
    /// Lowercase hex SHA-256 of the expected content, when pinned.
    pub expected_hash: Option<String>,
}

/// Outcome of fetching one entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DownloadStatus {
    Downloaded,
    SkippedUpToDate,
    Failed(String),
}

/// Per-entry record in the run manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub name: String,
    pub url: String,
    pub destination: PathBuf,
    /// Content length in bytes, when the content was obtained or reused.
    pub bytes: Option<u64>,
    /// Lowercase hex SHA-256 of the content, when obtained or reused.
    pub sha256: Option<String>,
    pub status: DownloadStatus,
}

/// Summary of a download run, one entry per configured source.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DownloadManifest {
    pub entries: Vec<ManifestEntry>,
}

impl DownloadManifest {
    /// Number of entries that failed.
    pub fn failed(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e.status, DownloadStatus::Failed(_)))
            .count()
    }
}

/// Lowercase hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn is_hex_hash(s: &str) -> bool {
    s.len() == 64 && s.bytes().all(|b| b.is_ascii_hexdigit())
}

/// Parses a download config CSV with the exact header
/// `name,url,destination,expected_hash`; the hash cell may be empty.
/// Problems are collected per line rather than stopping at the first.
pub fn parse_download_config(path: &Path) -> Result<Vec<DownloadEntry>, ErrorReport> {
    let file = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let bytes = std::fs::read(path)
        .map_err(|e| ErrorReport::new(vec![Error::io(path, e)]))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(bytes.as_slice());
    let headers = rdr.headers().map_err(|e| {
        ErrorReport::new(vec![Error::Config {
            file: file.clone(),
            line: 1,
            reason: e.to_string(),
        }])
    })?;
    let expected_header = "name,url,destination,expected_hash";
    let found = headers.iter().collect::<Vec<_>>().join(",");
    if found != expected_header {
        return Err(ErrorReport::new(vec![Error::Schema {
            file,
            expected: expected_header.into(),
            found,
        }]));
    }

    let mut errors = Vec::new();
    let mut entries = Vec::new();
    let mut seen: std::collections::HashMap<String, u64> = std::collections::HashMap::new();
    for record in rdr.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                errors.push(Error::Config {
                    file: file.clone(),
                    line: e.position().map(|p| p.line()).unwrap_or(0),
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 4 {
            errors.push(Error::Config {
                file: file.clone(),
                line,
                reason: format!("expected 4 fields, found {}", record.len()),
            });
            continue;
        }
        let mut bad = false;
        let mut require = |idx: usize, what: &str, errors: &mut Vec<Error>| -> String {
            let v = record.get(idx).unwrap_or("").trim().to_string();
            if v.is_empty() {
                errors.push(Error::Config {
                    file: file.clone(),
                    line,
                    reason: format!("{what} must not be empty"),
                });
                bad = true;
            }
            v
        };
        let name = require(0, "name", &mut errors);
        let url = require(1, "url", &mut errors);
        let destination = require(2, "destination", &mut errors);
        let hash_raw = record.get(3).unwrap_or("").trim().to_lowercase();
        let expected_hash = if hash_raw.is_empty() {
            None
        } else if is_hex_hash(&hash_raw) {
            Some(hash_raw)
        } else {
            errors.push(Error::Config {
                file: file.clone(),
                line,
                reason: "expected_hash must be 64 hex characters or empty".into(),
            });
            bad = true;
            None
        };
        if let Some(&first) = seen.get(&name) {
            errors.push(Error::Config {
                file: file.clone(),
                line,
                reason: format!("duplicate entry name {name:?}, first used on line {first}"),
            });
            bad = true;
        } else if !name.is_empty() {
            seen.insert(name.clone(), line);
        }
        if !bad {
            entries.push(DownloadEntry {
                name,
                url,
                destination: PathBuf::from(destination),
                expected_hash,
            });
        }
    }
    ErrorReport::new(errors).into_result()?;
    Ok(entries)
}

fn fetch(url: &str) -> Result<Vec<u8>, String> {
    let mut response = ureq::get(url)
        .call()
        .map_err(|e| format!("request failed: {e}"))?;
    let mut body = Vec::new();
    response
        .body_mut()
        .as_reader()
        .read_to_end(&mut body)
        .map_err(|e| format!("reading body failed: {e}"))?;
    Ok(body)
}

fn run_entry(entry: &DownloadEntry) -> (Option<u64>, Option<String>, DownloadStatus) {
    if let Some(expected) = &entry.expected_hash {
        if let Ok(existing) = std::fs::read(&entry.destination) {
            if &sha256_hex(&existing) == expected {
                return (
                    Some(existing.len() as u64),
                    Some(expected.clone()),
                    DownloadStatus::SkippedUpToDate,
                );
            }
        }
    }
    let body = match fetch(&entry.url) {
        Ok(b) => b,
        Err(reason) => return (None, None, DownloadStatus::Failed(reason)),
    };
    let actual = sha256_hex(&body);
    if let Some(expected) = &entry.expected_hash {
        if &actual != expected {
            let err = Error::HashMismatch {
                name: entry.name.clone(),
                expected: expected.clone(),
                actual,
            };
            return (
                Some(body.len() as u64),
                None,
                DownloadStatus::Failed(err.to_string()),
            );
        }
    }
    if let Some(parent) = entry.destination.parent() {
        if !parent.as_os_str().is_empty() {
            if let Err(e) = std::fs::create_dir_all(parent) {
                return (
                    None,
                    None,
                    DownloadStatus::Failed(format!("cannot create {}: {e}", parent.display())),
                );
            }
        }
    }
    match atomic_write(&entry.destination, &body) {
        Ok(()) => (Some(body.len() as u64), Some(actual), DownloadStatus::Downloaded),
        Err(e) => (None, None, DownloadStatus::Failed(e.to_string())),
    }
}

/// Fetches every entry in order, verifying checksums when configured.
/// A mismatched checksum counts as a failure and the destination file is
/// left untouched. Failures never abort the run; inspect
/// [`DownloadManifest::failed`] afterwards.
pub fn download_inputs(entries: &[DownloadEntry]) -> DownloadManifest {
    let mut manifest = DownloadManifest::default();
    for entry in entries {
        let (bytes, sha256, status) = run_entry(entry);
        manifest.entries.push(ManifestEntry {
            name: entry.name.clone(),
            url: entry.url.clone(),
            destination: entry.destination.clone(),
            bytes,
            sha256,
            status,
        });
    }
    manifest
}
