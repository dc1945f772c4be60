//! Append-only result cache.
//!
//! Each line is `<sha256 of json> <json record>`. Lines whose checksum does
//! not match are skipped and counted. Only the process holding
//! `<path>.lock` appends; other processes read.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::invariants::fingerprint::Fingerprint;

pub const CACHE_ENV: &str = "INCA_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub code: String,
    /// Budget description the entry was computed under.
    pub budget: String,
    pub fingerprint: Option<Fingerprint>,
    /// Best-known simplification as an `inca v1` document.
    pub simplified: Option<String>,
}

pub struct Cache {
    records: HashMap<(String, String), CacheRecord>,
    writer: Option<File>,
    lock: Option<PathBuf>,
    corrupted: usize,
}

fn checksum(payload: &str) -> String {
    Sha256::digest(payload.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl Cache {
    /// Path from `INCA_CACHE`, if set and nonempty.
    pub fn path_from_env() -> Option<PathBuf> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
    }

    pub fn open(path: &Path) -> io::Result<Cache> {
        let mut records = HashMap::new();
        let mut corrupted = 0;
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let parsed = line.split_once(' ').and_then(|(sum, json)| {
                    (checksum(json) == sum)
                        .then(|| serde_json::from_str::<CacheRecord>(json).ok())
                        .flatten()
                });
                match parsed {
                    Some(r) => {
                        records.insert((r.code.clone(), r.budget.clone()), r);
                    }
                    None => corrupted += 1,
                }
            }
        }
        let lock_path = path.with_extension("lock");
        let (writer, lock) = match OpenOptions::new().write(true).create_new(true).open(&lock_path) {
            Ok(_) => {
                let f = OpenOptions::new().create(true).append(true).open(path)?;
                (Some(f), Some(lock_path))
            }
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => (None, None),
            Err(e) => return Err(e),
        };
        Ok(Cache {
            records,
            writer,
            lock,
            corrupted,
        })
    }

    pub fn get(&self, code: &str, budget: &str) -> Option<&CacheRecord> {
        self.records.get(&(code.to_string(), budget.to_string()))
    }

    /// Appends a record; returns false when this handle is a reader.
    pub fn put(&mut self, record: CacheRecord) -> io::Result<bool> {
        let Some(w) = self.writer.as_mut() else {
            return Ok(false);
        };
        let json = serde_json::to_string(&record).map_err(io::Error::other)?;
        writeln!(w, "{} {}", checksum(&json), json)?;
        w.flush()?;
        self.records
            .insert((record.code.clone(), record.budget.clone()), record);
        Ok(true)
    }

    pub fn is_writer(&self) -> bool {
        self.writer.is_some()
    }

    pub fn corrupted(&self) -> usize {
        self.corrupted
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

impl Drop for Cache {
    fn drop(&mut self) {
        if let Some(lock) = self.lock.take() {
            let _ = fs::remove_file(lock);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(code: &str) -> CacheRecord {
        CacheRecord {
            code: code.into(),
            budget: "d3".into(),
            fingerprint: None,
            simplified: Some("inca v1\n".into()),
        }
    }

    #[test]
    fn write_reopen_and_skip_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        {
            let mut c = Cache::open(&path).unwrap();
            assert!(c.is_writer());
            assert!(c.put(record("a")).unwrap());
            assert!(c.put(record("b")).unwrap());
        }
        let mut text = fs::read_to_string(&path).unwrap();
        text = text.replacen("\"a\"", "\"x\"", 1);
        text.push_str("garbage line\n");
        fs::write(&path, text).unwrap();
        let c = Cache::open(&path).unwrap();
        assert_eq!(c.corrupted(), 2);
        assert!(c.get("b", "d3").is_some());
        assert!(c.get("a", "d3").is_none());
    }

    #[test]
    fn second_handle_is_reader() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let first = Cache::open(&path).unwrap();
        let mut second = Cache::open(&path).unwrap();
        assert!(first.is_writer());
        assert!(!second.is_writer());
        assert!(!second.put(record("a")).unwrap());
        drop(first);
        assert!(Cache::open(&path).unwrap().is_writer());
    }
}
