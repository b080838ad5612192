//! Output plumbing: staged atomic writes, the JSON report envelope, and
//! CSV assembly.
//!
//! Artifacts are first written to hidden temp files next to their final
//! paths; the renames happen only once every artifact of the command exists
//! in full. A failure anywhere drops the temps, so a nonzero exit never
//! leaves partial output behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use heavytail::{Error, Result};
use serde::Serialize;

pub struct OutputSet {
    staged: Vec<(PathBuf, PathBuf)>,
}

impl OutputSet {
    pub fn new() -> Self {
        OutputSet { staged: Vec::new() }
    }

    /// Write `bytes` to a temp file next to `path`.
    pub fn stage(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        let name = path.file_name().ok_or_else(|| Error::InvalidParameter {
            name: "output",
            reason: format!("{} has no file name", path.display()),
        })?;
        let tmp = path
            .with_file_name(format!(".{}.tmp.{}", name.to_string_lossy(), std::process::id()));
        let mut file = fs::File::create(&tmp)?;
        // Register before writing so a short write still gets cleaned up.
        self.staged.push((tmp, path.to_path_buf()));
        file.write_all(bytes)?;
        Ok(())
    }

    /// Move every staged file to its final name.
    pub fn commit(mut self) -> Result<()> {
        while let Some((tmp, path)) = self.staged.pop() {
            if let Err(e) = fs::rename(&tmp, &path) {
                self.staged.push((tmp, path));
                return Err(e.into());
            }
        }
        Ok(())
    }
}

impl Drop for OutputSet {
    fn drop(&mut self) {
        for (tmp, _) in &self.staged {
            let _ = fs::remove_file(tmp);
        }
    }
}

/// Standard report wrapper. `seed` is the seed the command actually used
/// and is null for deterministic commands; `config` echoes the resolved
/// arguments so the run can be reproduced from the report alone.
pub fn envelope<C: Serialize, R: Serialize>(
    command: &str,
    seed: Option<u64>,
    config: &C,
    result: &R,
) -> Result<Vec<u8>> {
    let value = serde_json::json!({
        "tool": "heavytail",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": seed,
        "config": config,
        "result": result,
    });
    let mut bytes =
        serde_json::to_vec_pretty(&value).map_err(|e| Error::InvalidData(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// One header row, then the records; absent values are empty fields.
pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::InvalidData(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidData(e.to_string())
}

/// Shortest round-trip decimal for a float cell.
pub fn num(x: f64) -> String {
    x.to_string()
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Print a finished report to stdout (used when no report path was given).
pub fn to_stdout(bytes: &[u8]) -> Result<()> {
    std::io::stdout().write_all(bytes)?;
    Ok(())
}
