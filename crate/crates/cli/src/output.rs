use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use catconv::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Output directory writer: every file lands via write-temp-then-rename and
/// is recorded with its checksum.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileRecord>,
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Format(format!("{}: {e}", path.display()))
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).map_err(|e| io_err(root, e))?;
        Ok(Self { root: root.to_path_buf(), files: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn files(&self) -> &[FileRecord] {
        &self.files
    }

    /// Write without recording in the checksum list.
    pub fn write_unrecorded(&self, rel: &str, bytes: &[u8]) -> Result<()> {
        let target = self.root.join(rel);
        if let Some(dir) = target.parent() {
            fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        }
        let tmp = target.with_file_name(format!(
            ".{}.tmp",
            target.file_name().and_then(|n| n.to_str()).unwrap_or("out")
        ));
        let mut f = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
        f.write_all(bytes).map_err(|e| io_err(&tmp, e))?;
        f.sync_all().map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, &target).map_err(|e| io_err(&target, e))
    }

    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        self.write_unrecorded(rel, bytes)?;
        self.files.retain(|f| f.path != rel);
        self.files.push(FileRecord { path: rel.to_string(), sha256: sha256_hex(bytes), bytes: bytes.len() });
        Ok(())
    }

    pub fn write_json<T: Serialize + ?Sized>(&mut self, rel: &str, value: &T) -> Result<()> {
        let mut text = catconv::io::to_json(value)?;
        text.push('\n');
        self.write(rel, text.as_bytes())
    }

    pub fn write_csv<T: Serialize>(&mut self, rel: &str, rows: &[T]) -> Result<()> {
        let mut buf = Vec::new();
        catconv::io::write_csv(rows, &mut buf)?;
        self.write(rel, &buf)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
