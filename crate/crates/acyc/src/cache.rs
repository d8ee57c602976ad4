//! Versioned on-disk cache: `MAGIC ‖ version ‖ key ‖ bincode payload`, written to a
//! temporary file in the cache directory and renamed into place.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "ACYC_CACHE_DIR";
const MAGIC: &[u8; 8] = b"ACYCACHE";

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache io at {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path} has cache version {found}, this build reads {expected}")]
    Version { path: String, found: u32, expected: u32 },
    #[error("{0} is not a cache file")]
    Magic(String),
    #[error("cache payload: {0}")]
    Codec(#[from] bincode::Error),
}

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CacheError + '_ {
    move |source| CacheError::Io { path: path.display().to_string(), source }
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    /// An explicit directory wins over `ACYC_CACHE_DIR`; with neither the cache is off.
    pub fn resolve(explicit: Option<PathBuf>) -> Self {
        let dir = explicit.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
        Cache { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, kind: &str, key: &str) -> Option<PathBuf> {
        let digest = Sha256::digest(key.as_bytes());
        let name: String = digest[..12].iter().map(|b| format!("{b:02x}")).collect();
        self.dir.as_ref().map(|d| d.join(format!("{kind}-{name}.bin")))
    }

    pub fn get<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Result<Option<T>, CacheError> {
        let Some(path) = self.path(kind, key) else { return Ok(None) };
        let mut file = match fs::File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(io_err(&path)(e)),
        };
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes).map_err(io_err(&path))?;
        if bytes.len() < 16 || &bytes[..8] != MAGIC {
            return Err(CacheError::Magic(path.display().to_string()));
        }
        let found = u32::from_le_bytes(bytes[8..12].try_into().expect("four bytes"));
        if found != CACHE_VERSION {
            return Err(CacheError::Version { path: path.display().to_string(), found, expected: CACHE_VERSION });
        }
        let klen = u32::from_le_bytes(bytes[12..16].try_into().expect("four bytes")) as usize;
        if bytes.len() < 16 + klen || &bytes[16..16 + klen] != key.as_bytes() {
            // digest collision: treat as a miss
            return Ok(None);
        }
        Ok(Some(bincode::deserialize(&bytes[16 + klen..])?))
    }

    pub fn put<T: Serialize>(&self, kind: &str, key: &str, value: &T) -> Result<(), CacheError> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(kind, key)) else { return Ok(()) };
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
        tmp.write_all(MAGIC).map_err(io_err(&path))?;
        tmp.write_all(&CACHE_VERSION.to_le_bytes()).map_err(io_err(&path))?;
        tmp.write_all(&(key.len() as u32).to_le_bytes()).map_err(io_err(&path))?;
        tmp.write_all(key.as_bytes()).map_err(io_err(&path))?;
        bincode::serialize_into(&mut tmp, value)?;
        tmp.persist(&path).map_err(|e| io_err(&path)(e.error))?;
        Ok(())
    }

    /// Cached value for `key`, or `compute()` stored under it. The flag reports a hit.
    pub fn get_or_compute<T, E, F>(&self, kind: &str, key: &str, compute: F) -> Result<(T, bool), E>
    where
        T: Serialize + DeserializeOwned,
        E: From<CacheError>,
        F: FnOnce() -> Result<T, E>,
    {
        if let Some(v) = self.get(kind, key)? {
            return Ok((v, true));
        }
        let v = compute()?;
        self.put(kind, key, &v)?;
        Ok((v, false))
    }
}
