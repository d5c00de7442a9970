//! Content-addressed cache for Smith normal form results. The key is the
//! SHA-256 of the boundary data plus the homology degree and an algorithm
//! version tag, so a stale entry can never be confused with a current one.
//! Misses and IO failures fall back to recomputation; the cache is advisory.

use std::fs;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

/// Bumped whenever the reduction pipeline changes meaning.
pub const ALGO_VERSION: &str = "snf-1";

pub struct Cache {
    dir: Option<PathBuf>,
}

fn default_dir() -> Option<PathBuf> {
    if let Ok(d) = std::env::var("RSC_CACHE_DIR") {
        if !d.is_empty() {
            return Some(PathBuf::from(d));
        }
    }
    if let Ok(d) = std::env::var("XDG_CACHE_HOME") {
        if !d.is_empty() {
            return Some(PathBuf::from(d).join("rsc"));
        }
    }
    if let Ok(d) = std::env::var("HOME") {
        if !d.is_empty() {
            return Some(PathBuf::from(d).join(".cache").join("rsc"));
        }
    }
    None
}

impl Cache {
    /// An explicit flag wins over RSC_CACHE_DIR, which wins over the platform
    /// cache directory. `disabled` turns every lookup into a miss.
    pub fn new(flag: Option<PathBuf>, disabled: bool) -> Self {
        let dir = if disabled { None } else { flag.or_else(default_dir) };
        Cache { dir }
    }

    pub fn key(parts: &[&[u8]]) -> String {
        let mut h = Sha256::new();
        h.update(ALGO_VERSION.as_bytes());
        for p in parts {
            h.update((p.len() as u64).to_le_bytes());
            h.update(p);
        }
        format!("{:x}", h.finalize())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        let dir = self.dir.as_ref()?;
        fs::read_to_string(dir.join(key)).ok()
    }

    /// Atomic write: temp file in the same directory, then rename. Failures
    /// are swallowed; a cache that cannot be written only costs time.
    pub fn put(&self, key: &str, value: &str) {
        let Some(dir) = self.dir.as_ref() else {
            return;
        };
        if fs::create_dir_all(dir).is_err() {
            return;
        }
        let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
        if fs::write(&tmp, value).is_ok() {
            let _ = fs::rename(&tmp, dir.join(key));
        }
    }
}
