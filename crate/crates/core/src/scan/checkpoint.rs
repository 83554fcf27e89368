use std::fs;
use std::io::{ErrorKind, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::record::SCHEMA_VERSION;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub schema_version: u32,
    pub config_hash: String,
    pub last_completed_index: u64,
}

impl Checkpoint {
    pub fn new(config_hash: impl Into<String>, last_completed_index: u64) -> Self {
        Checkpoint {
            schema_version: SCHEMA_VERSION,
            config_hash: config_hash.into(),
            last_completed_index,
        }
    }

    /// First index that still has to be processed.
    pub fn resume_index(&self) -> u64 {
        self.last_completed_index + 1
    }
}

/// Writes the checkpoint through a temporary file and a rename, so a crash
/// leaves either the old or the new checkpoint.
pub fn checkpoint_save(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    let context = || format!("writing checkpoint {}", path.display());
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    let mut file = fs::File::create(tmp).map_err(|e| Error::io(context(), e))?;
    let body = serde_json::to_vec(checkpoint).expect("checkpoint serializes");
    file.write_all(&body)
        .and_then(|_| file.write_all(b"\n"))
        .and_then(|_| file.sync_all())
        .map_err(|e| Error::io(context(), e))?;
    fs::rename(tmp, path).map_err(|e| Error::io(context(), e))
}

/// Loads a checkpoint; `Ok(None)` when the file does not exist.
pub fn checkpoint_load(path: &Path, expected_hash: &str) -> Result<Option<Checkpoint>> {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
        Err(e) => {
            return Err(Error::io(
                format!("reading checkpoint {}", path.display()),
                e,
            ))
        }
    };
    let checkpoint: Checkpoint =
        serde_json::from_str(text.trim()).map_err(|e| Error::CorruptCheckpoint {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })?;
    if checkpoint.schema_version != SCHEMA_VERSION {
        return Err(Error::CorruptCheckpoint {
            path: path.to_path_buf(),
            detail: format!("unsupported schema_version {}", checkpoint.schema_version),
        });
    }
    if checkpoint.config_hash != expected_hash {
        return Err(Error::CheckpointMismatch {
            path: path.to_path_buf(),
            expected: expected_hash.to_string(),
            found: checkpoint.config_hash,
        });
    }
    Ok(Some(checkpoint))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn save_and_reload_resumes_after_last_index() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.ckpt");
        checkpoint_save(&path, &Checkpoint::new("abc", 500)).unwrap();
        let loaded = checkpoint_load(&path, "abc").unwrap().unwrap();
        assert_eq!(loaded.resume_index(), 501);
    }

    #[test]
    fn missing_file_means_fresh_start() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(
            checkpoint_load(&dir.path().join("none"), "abc").unwrap(),
            None
        );
    }

    #[test]
    fn mismatched_hash_names_both() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.ckpt");
        checkpoint_save(&path, &Checkpoint::new("old-hash", 10)).unwrap();
        let err = checkpoint_load(&path, "new-hash").unwrap_err().to_string();
        assert!(
            err.contains("old-hash") && err.contains("new-hash"),
            "{err}"
        );
    }

    #[test]
    fn corrupt_file_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.ckpt");
        fs::write(&path, "{\"config_hash\": 3").unwrap();
        assert!(matches!(
            checkpoint_load(&path, "abc"),
            Err(Error::CorruptCheckpoint { .. })
        ));
    }
}
