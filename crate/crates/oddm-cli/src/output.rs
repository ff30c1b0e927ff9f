use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Write via a temp file in the same directory plus rename, so readers never
/// observe a half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(ext) => format!("{}.tmp", ext.to_string_lossy()),
        None => "tmp".to_string(),
    });
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Per-run output sink: creates the directory, honors the format filter and
/// reports every file it writes.
pub struct Sink {
    dir: PathBuf,
    format: Option<Format>,
}

impl Sink {
    pub fn new(dir: &Path, format: Option<Format>) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            format,
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn csv(&self, stem: &str, contents: &str) -> Result<()> {
        if self.format != Some(Format::Json) {
            let path = self.path(&format!("{stem}.csv"));
            write_atomic(&path, contents)?;
            println!("wrote {}", path.display());
        }
        Ok(())
    }

    pub fn json(&self, stem: &str, contents: &str) -> Result<()> {
        if self.format != Some(Format::Csv) {
            self.json_always(stem, contents)?;
        }
        Ok(())
    }

    /// For artifacts that only exist as JSON (reports, drawn channels): the
    /// format filter does not apply.
    pub fn json_always(&self, stem: &str, contents: &str) -> Result<()> {
        let path = self.path(&format!("{stem}.json"));
        write_atomic(&path, contents)?;
        println!("wrote {}", path.display());
        Ok(())
    }

    /// Sidecar with the fully resolved parameter set; always JSON.
    pub fn sidecar(&self, stem: &str, value: &serde_json::Value) -> Result<()> {
        let path = self.path(&format!("{stem}_params.json"));
        write_atomic(&path, &serde_json::to_string_pretty(value)?)?;
        println!("wrote {}", path.display());
        Ok(())
    }
}
