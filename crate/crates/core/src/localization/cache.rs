//! On-disk cache of computed coefficients, one JSON file per key.
//!
//! A file stores its key, a hash of the key, the payload and a SHA-256
//! digest of the payload's serialization. Any mismatch on load is reported
//! as corruption rather than silently recomputed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::LocalizationError;

const FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub r: usize,
    pub nf: usize,
    pub n: usize,
    /// `symbolic`, or `randomized-<points>-<seed>`.
    pub mode: String,
}

impl CacheKey {
    pub fn to_json(&self) -> Value {
        json!({"format": FORMAT, "r": self.r, "nf": self.nf, "n": self.n, "mode": self.mode})
    }

    pub fn hash(&self) -> String {
        sha256_hex(self.to_json().to_string().as_bytes())
    }

    fn file_name(&self) -> String {
        format!("alpha-r{}-nf{}-n{}-{}.json", self.r, self.nf, self.n, self.mode)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug)]
pub struct AlphaCache {
    dir: PathBuf,
}

impl AlphaCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        AlphaCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// `Ok(None)` on a miss.
    pub fn load(&self, key: &CacheKey) -> Result<Option<Value>, LocalizationError> {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(LocalizationError::CacheIo(format!("{}: {e}", path.display()))),
        };
        let corrupt = || LocalizationError::CacheCorrupt(path.display().to_string());
        let doc: Value = serde_json::from_str(&text).map_err(|_| corrupt())?;
        let value = doc.get("value").ok_or_else(corrupt)?;
        let ok = doc.get("key") == Some(&key.to_json())
            && doc.get("key_hash").and_then(Value::as_str) == Some(key.hash().as_str())
            && doc.get("digest").and_then(Value::as_str)
                == Some(sha256_hex(value.to_string().as_bytes()).as_str());
        if !ok {
            return Err(corrupt());
        }
        Ok(Some(value.clone()))
    }

    pub fn store(&self, key: &CacheKey, value: &Value) -> Result<(), LocalizationError> {
        let io = |e: std::io::Error| LocalizationError::CacheIo(format!("{}: {e}", self.dir.display()));
        fs::create_dir_all(&self.dir).map_err(io)?;
        let doc = json!({
            "key": key.to_json(),
            "key_hash": key.hash(),
            "digest": sha256_hex(value.to_string().as_bytes()),
            "value": value,
        });
        let path = self.path(key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(doc.to_string().as_bytes()).map_err(io)?;
        f.write_all(b"\n").map_err(io)?;
        drop(f);
        fs::rename(&tmp, &path).map_err(io)
    }
}
