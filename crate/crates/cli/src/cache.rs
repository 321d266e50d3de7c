//! On-disk result cache. One JSON file per key; the file name is the SHA-256
//! of the key, the payload carries its own checksum, and writes go through a
//! temporary file renamed into place so readers never see a partial entry.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever the rendered output of any command may change.
pub const ARTIFACT_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+schema1");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub operation: String,
    /// Canonical parameter encoding, including the output format.
    pub params: String,
    pub version: String,
}

impl CacheKey {
    pub fn new(operation: &str, params: impl Into<String>) -> Self {
        Self { operation: operation.into(), params: params.into(), version: ARTIFACT_VERSION.into() }
    }

    fn file_stem(&self) -> String {
        let mut h = Sha256::new();
        for part in [&self.operation, &self.params, &self.version] {
            h.update(part.as_bytes());
            h.update([0u8]);
        }
        hex::encode(h.finalize())
    }
}

/// A rendered report and whether every check in it passed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedOutput {
    pub body: String,
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: CacheKey,
    pub payload: CachedOutput,
    pub checksum: String,
}

fn checksum(payload: &CachedOutput) -> String {
    let mut h = Sha256::new();
    h.update(payload.body.as_bytes());
    h.update([u8::from(payload.failed)]);
    hex::encode(h.finalize())
}

#[derive(Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit(CachedOutput),
    Miss,
    /// The entry existed but could not be trusted; the reason is for a warning.
    Corrupt(String),
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.file_stem()))
    }

    pub fn load(&self, key: &CacheKey) -> Lookup {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Corrupt(format!("{}: {e}", path.display())),
        };
        let record: CacheRecord = match serde_json::from_str(&text) {
            Ok(r) => r,
            Err(e) => return Lookup::Corrupt(format!("{}: {e}", path.display())),
        };
        if record.key != *key {
            return Lookup::Corrupt(format!("{}: key mismatch", path.display()));
        }
        if record.checksum != checksum(&record.payload) {
            return Lookup::Corrupt(format!("{}: checksum mismatch", path.display()));
        }
        Lookup::Hit(record.payload)
    }

    pub fn store(&self, key: &CacheKey, payload: &CachedOutput) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let record = CacheRecord { key: key.clone(), payload: payload.clone(), checksum: checksum(payload) };
        let text = serde_json::to_string(&record).map_err(std::io::Error::other)?;
        write_atomic(&self.path_for(key), text.as_bytes())
    }
}

/// Writes `bytes` to a temporary file next to `path`, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let key = CacheKey::new("matrix", "n=8 which=Mhat format=csv");
        assert_eq!(cache.load(&key), Lookup::Miss);
        let payload = CachedOutput { body: "a,b\n1,2\n".into(), failed: false };
        cache.store(&key, &payload).unwrap();
        assert_eq!(cache.load(&key), Lookup::Hit(payload.clone()));

        let stale = CacheKey { version: "0.0.0".into(), ..key.clone() };
        assert_eq!(cache.load(&stale), Lookup::Miss);

        let path = cache.path_for(&key);
        let text = fs::read_to_string(&path).unwrap().replace("1,2", "1,3");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.load(&key), Lookup::Corrupt(_)));
    }
}
