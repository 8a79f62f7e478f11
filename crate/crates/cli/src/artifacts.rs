//! Atomic, hash-stamped output files.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Hex SHA-256 over length-prefixed parts, so part boundaries matter.
pub fn config_hash(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes files into one output directory via temp file and rename.
pub struct Artifacts {
    dir: PathBuf,
    config_hash: String,
    seed: u64,
}

impl Artifacts {
    pub fn new(dir: &Path, config_hash: String, seed: u64) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), config_hash, seed })
    }

    pub fn config_hash(&self) -> &str {
        &self.config_hash
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn write_atomic(&self, name: &str, bytes: &[u8]) -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.dir.join(name)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Pretty JSON with `config_hash` and `seed` added at the top level.
    pub fn write_json<S: Serialize>(&self, name: &str, value: &S) -> std::io::Result<()> {
        let mut v = serde_json::to_value(value).map_err(std::io::Error::other)?;
        if let serde_json::Value::Object(map) = &mut v {
            map.insert("config_hash".into(), self.config_hash.clone().into());
            map.insert("seed".into(), self.seed.into());
        }
        let mut text = serde_json::to_string_pretty(&v).map_err(std::io::Error::other)?;
        text.push('\n');
        self.write_atomic(name, text.as_bytes())
    }

    /// CSV whose first line is `# config_hash=...,seed=...`.
    pub fn write_csv<I>(&self, name: &str, header: &[&str], rows: I) -> std::io::Result<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let mut out = format!("# config_hash={},seed={}\n{}\n", self.config_hash, self.seed, header.join(","));
        for row in rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        self.write_atomic(name, out.as_bytes())
    }
}
