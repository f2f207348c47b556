//! On-disk result cache: one JSON file per entry, named by the SHA-256 of the key.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumping this invalidates every stored entry.
pub const CACHE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "/1");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheKey {
    pub model: String,
    pub ideal: String,
    pub q: u32,
    pub engine: String,
}

impl CacheKey {
    fn text(&self, version: &str) -> String {
        format!(
            "binhk {version}\nmodel={}\nideal={}\nq={}\nengine={}",
            self.model, self.ideal, self.q, self.engine
        )
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    value: String,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    /// Number of times the compute closure ran.
    pub computed: u64,
    pub discarded: u64,
}

pub struct Cache {
    dir: Option<PathBuf>,
    version: String,
    hits: AtomicU64,
    computed: AtomicU64,
    discarded: AtomicU64,
}

impl Cache {
    /// A cache that stores nothing and always computes.
    pub fn disabled() -> Self {
        Cache::build(None, CACHE_VERSION)
    }

    pub fn at(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        Cache::with_version(dir, CACHE_VERSION)
    }

    pub fn with_version(dir: impl Into<PathBuf>, version: &str) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache::build(Some(dir), version))
    }

    fn build(dir: Option<PathBuf>, version: &str) -> Self {
        Cache {
            dir,
            version: version.to_string(),
            hits: AtomicU64::new(0),
            computed: AtomicU64::new(0),
            discarded: AtomicU64::new(0),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            computed: self.computed.load(Ordering::Relaxed),
            discarded: self.discarded.load(Ordering::Relaxed),
        }
    }

    fn path(&self, dir: &Path, text: &str) -> PathBuf {
        let digest = Sha256::digest(text.as_bytes());
        let name: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        dir.join(format!("{name}.json"))
    }

    /// Stored value for `key`, or the result of `compute`, which is then persisted.
    /// Unreadable or mismatched entries are discarded and recomputed.
    pub fn get_or_compute<E>(
        &self,
        key: &CacheKey,
        compute: impl FnOnce() -> Result<String, E>,
    ) -> Result<String, E> {
        let Some(dir) = &self.dir else {
            self.computed.fetch_add(1, Ordering::Relaxed);
            return compute();
        };
        let text = key.text(&self.version);
        let path = self.path(dir, &text);
        if let Ok(bytes) = fs::read(&path) {
            match serde_json::from_slice::<Entry>(&bytes) {
                Ok(e) if e.key == text => {
                    self.hits.fetch_add(1, Ordering::Relaxed);
                    return Ok(e.value);
                }
                _ => {
                    self.discarded.fetch_add(1, Ordering::Relaxed);
                }
            }
        }
        self.computed.fetch_add(1, Ordering::Relaxed);
        let value = compute()?;
        // A failed write only costs a recomputation next time.
        let _ = persist(
            dir,
            &path,
            &Entry {
                key: text,
                value: value.clone(),
            },
        );
        Ok(value)
    }
}

/// Write to a temporary file in the cache directory, then rename over the target.
fn persist(dir: &Path, path: &Path, entry: &Entry) -> std::io::Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&mut tmp, entry)?;
    tmp.write_all(b"\n")?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
