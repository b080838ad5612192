//! Plain-text sample files: a `# key: value` header, then one value per
//! line. Floats are printed in the shortest decimal form that parses back
//! to the same bits, so rewriting what was read is byte-identical.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use heavytail::distributions::SampleSet;
use heavytail::{Error, Result};

pub fn to_bytes(set: &SampleSet<f64>, label: &str) -> Result<Vec<u8>> {
    let origin =
        serde_json::to_string(&set.origin).map_err(|e| Error::InvalidData(e.to_string()))?;
    let mut out = Vec::with_capacity(set.len() * 20 + 256);
    writeln!(out, "# heavytail-sample v1")?;
    writeln!(out, "# label: {label}")?;
    writeln!(out, "# n: {}", set.len())?;
    writeln!(out, "# seed: {}", set.seed)?;
    writeln!(out, "# replicate: {}", set.replicate_id)?;
    writeln!(out, "# origin: {origin}")?;
    for v in &set.values {
        writeln!(out, "{v}")?;
    }
    Ok(out)
}

/// Read a sample file (or any one-number-per-line file; `#` lines and
/// blanks are skipped). The `label` header survives the round trip, the
/// rest of the metadata is informational.
pub fn read(path: &Path) -> Result<SampleSet<f64>> {
    let file = std::fs::File::open(path)?;
    let mut values = Vec::new();
    let mut label = None;
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix('#') {
            if let Some((key, value)) = rest.split_once(':') {
                if key.trim() == "label" {
                    label = Some(value.trim().to_string());
                }
            }
            continue;
        }
        let v = text.parse::<f64>().map_err(|_| Error::Parse {
            line: idx as u64 + 1,
            reason: format!("`{text}` is not a number"),
        })?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::InvalidData(format!("{}: no values", path.display())));
    }
    let label = label.unwrap_or_else(|| {
        path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    });
    Ok(SampleSet::from_data(values, label))
}
