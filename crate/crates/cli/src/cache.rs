//! On-disk cache of L-value records.
//!
//! One CSV file per `(sigma, method)` pair, append-only, each row tagged with
//! the hash of the evaluation budget that produced it. `index.json` records
//! the expected row and byte counts of every file; a mismatch or an
//! unparsable row marks the file corrupt, and it is discarded and rebuilt.

use lresonance::experiments::RecordCache;
use lresonance::lfunc::{LValueRecord, Method, CSV_HEADER};
use lresonance::special::PrecisionBudget;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

pub const INDEX_FILE: &str = "index.json";
const INDEX_SCHEMA: u32 = 1;

/// Hex digest identifying the settings that determine a record's value.
pub fn budget_hash(method: Method, sigma: f64, budget: &PrecisionBudget, length: f64) -> String {
    let key = match method {
        Method::Afe | Method::Oracle => format!(
            "{method}|{sigma:?}|{:?}|{:?}|{}",
            budget.abs_tol, budget.rel_tol, budget.max_subdivisions
        ),
        Method::EulerTrunc | Method::PrimeSum => format!("{method}|{sigma:?}|{length:?}"),
    };
    let digest = Sha256::digest(key.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

pub fn file_name(sigma: f64, method: Method) -> String {
    format!("{method}_sigma_{sigma:?}.csv")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Entry {
    sigma: f64,
    method: Method,
    rows: u64,
    bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Index {
    schema: u32,
    files: BTreeMap<String, Entry>,
}

impl Default for Index {
    fn default() -> Self {
        Self {
            schema: INDEX_SCHEMA,
            files: BTreeMap::new(),
        }
    }
}

#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    index: Index,
    warnings: Vec<String>,
}

fn header() -> String {
    format!("{CSV_HEADER},budget_hash\n")
}

/// Parses a whole cache file; `None` if any line is malformed or belongs to
/// another `(sigma, method)` pair.
fn parse_file(text: &str, sigma: f64, method: Method) -> Option<Vec<(LValueRecord, String)>> {
    let mut lines = text.split_inclusive('\n');
    if lines.next()? != header() {
        return None;
    }
    let mut out = Vec::new();
    for line in lines {
        let line = line.strip_suffix('\n')?;
        let (row, hash) = line.rsplit_once(',')?;
        let rec = LValueRecord::from_csv_row(row).ok()?;
        if rec.method != method || rec.sigma.to_bits() != sigma.to_bits() || hash.len() != 16 {
            return None;
        }
        out.push((rec, hash.to_string()));
    }
    Some(out)
}

fn parse_name(name: &str) -> Option<(f64, Method)> {
    let stem = name.strip_suffix(".csv")?;
    let (method, sigma) = stem.split_once("_sigma_")?;
    Some((sigma.parse().ok()?, method.parse().ok()?))
}

impl Cache {
    /// Opens (creating if needed) the cache in `dir`, rebuilding the index
    /// from the CSV files when it is missing or unreadable.
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let mut cache = Self {
            dir: dir.to_path_buf(),
            index: Index::default(),
            warnings: Vec::new(),
        };
        let index_path = dir.join(INDEX_FILE);
        match fs::read_to_string(&index_path) {
            Ok(text) => match serde_json::from_str::<Index>(&text) {
                Ok(ix) if ix.schema == INDEX_SCHEMA => cache.index = ix,
                _ => {
                    cache.warn("cache index is unreadable; rebuilding from data files".into());
                    cache.rebuild_index()?;
                }
            },
            Err(e) if e.kind() == io::ErrorKind::NotFound => cache.rebuild_index()?,
            Err(e) => return Err(e),
        }
        Ok(cache)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Warnings raised so far, drained.
    pub fn take_warnings(&mut self) -> Vec<String> {
        std::mem::take(&mut self.warnings)
    }

    fn warn(&mut self, msg: String) {
        self.warnings.push(msg);
    }

    fn rebuild_index(&mut self) -> io::Result<()> {
        self.index = Index::default();
        let mut names: Vec<String> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok())
            .filter_map(|e| e.file_name().into_string().ok())
            .filter(|n| n.ends_with(".csv"))
            .collect();
        names.sort();
        for name in names {
            let path = self.dir.join(&name);
            let Some((sigma, method)) = parse_name(&name) else {
                continue;
            };
            let text = fs::read_to_string(&path).unwrap_or_default();
            match parse_file(&text, sigma, method) {
                Some(rows) => {
                    self.index.files.insert(
                        name,
                        Entry {
                            sigma,
                            method,
                            rows: rows.len() as u64,
                            bytes: text.len() as u64,
                        },
                    );
                }
                None => {
                    self.warn(format!("cache file {name} is corrupt; discarding it"));
                    fs::remove_file(&path)?;
                }
            }
        }
        self.write_index()
    }

    fn write_index(&self) -> io::Result<()> {
        let tmp = self.dir.join(format!("{INDEX_FILE}.tmp"));
        let text = serde_json::to_string_pretty(&self.index).map_err(io::Error::other)?;
        fs::write(&tmp, text)?;
        fs::rename(tmp, self.dir.join(INDEX_FILE))
    }

    fn discard(&mut self, name: &str, why: &str) -> io::Result<()> {
        self.warn(format!("cache file {name} is corrupt ({why}); rebuilding it"));
        let path = self.dir.join(name);
        if path.exists() {
            fs::remove_file(path)?;
        }
        self.index.files.remove(name);
        self.write_index()
    }

    /// Records for `(sigma, method)` produced under `hash`.
    pub fn load(&mut self, sigma: f64, method: Method, hash: &str) -> io::Result<RecordCache> {
        let name = file_name(sigma, method);
        let path = self.dir.join(&name);
        let entry = self.index.files.get(&name).cloned();
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => {
                if entry.is_some() {
                    self.discard(&name, "file missing")?;
                }
                return Ok(RecordCache::new());
            }
            Err(e) => return Err(e),
        };
        let Some(entry) = entry else {
            self.discard(&name, "not in index")?;
            return Ok(RecordCache::new());
        };
        if entry.bytes != text.len() as u64 {
            self.discard(&name, "size differs from index")?;
            return Ok(RecordCache::new());
        }
        let Some(rows) = parse_file(&text, sigma, method) else {
            self.discard(&name, "malformed row")?;
            return Ok(RecordCache::new());
        };
        if rows.len() as u64 != entry.rows {
            self.discard(&name, "row count differs from index")?;
            return Ok(RecordCache::new());
        }
        Ok(rows
            .into_iter()
            .filter(|(_, h)| h == hash)
            .map(|(r, _)| (r.d, r))
            .collect())
    }

    /// Appends records that share `(sigma, method)` and `hash`.
    pub fn append(&mut self, sigma: f64, method: Method, hash: &str, records: &[LValueRecord]) -> io::Result<()> {
        if records.is_empty() {
            return Ok(());
        }
        let name = file_name(sigma, method);
        let path = self.dir.join(&name);
        let mut entry = self.index.files.get(&name).cloned().unwrap_or(Entry {
            sigma,
            method,
            rows: 0,
            bytes: 0,
        });
        let mut buf = String::new();
        if entry.bytes == 0 {
            // fresh file, or a stale one not covered by the index
            buf.push_str(&header());
            let _ = fs::remove_file(&path);
        }
        for r in records {
            debug_assert!(r.method == method && r.sigma == sigma);
            buf.push_str(&r.to_csv_row());
            buf.push(',');
            buf.push_str(hash);
            buf.push('\n');
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
        f.write_all(buf.as_bytes())?;
        f.sync_data()?;
        entry.rows += records.len() as u64;
        entry.bytes = f.metadata()?.len();
        self.index.files.insert(name, entry);
        self.write_index()
    }
}
