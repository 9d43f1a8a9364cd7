//! Conversion of aggregate CSVs into whitespace-separated .dat files for
//! plotting tools. Values are copied verbatim, so numbers survive the
//! round trip exactly as written.

use std::path::{Path, PathBuf};

use i2i_core::{Error, Result};

use crate::csvio::read_csv;

/// Aggregate files the report step knows how to convert.
pub const AGGREGATE_FILES: [&str; 4] = [
    "vi_by_attack.csv",
    "vi_by_band.csv",
    "vi_by_defense.csv",
    "transfer_grid.csv",
];

/// Converts one aggregate CSV to a .dat next to it. Comment headers are
/// carried over and a `columns:` line names the fields.
pub fn csv_to_dat(csv_path: &Path) -> Result<PathBuf> {
    let parsed = read_csv(csv_path)?;
    let mut out = String::new();
    for c in &parsed.comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str("# columns: ");
    out.push_str(&parsed.header.join(" "));
    out.push('\n');
    for (i, row) in parsed.rows.iter().enumerate() {
        for field in row {
            if field.chars().any(|c| c.is_whitespace()) || field.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "{}: data row {}: field {:?} cannot be written whitespace-separated",
                    csv_path.display(),
                    i + 1,
                    field
                )));
            }
        }
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    let dat_path = csv_path.with_extension("dat");
    std::fs::write(&dat_path, out)?;
    Ok(dat_path)
}

/// Converts every known aggregate present in `dir`. Errors if none exist.
pub fn emit_plotdata(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for name in AGGREGATE_FILES {
        let csv = dir.join(name);
        if csv.exists() {
            written.push(csv_to_dat(&csv)?);
        }
    }
    if written.is_empty() {
        return Err(Error::ImageFormat(format!(
            "no aggregate CSVs in {}; run `i2i run-experiment` first",
            dir.display()
        )));
    }
    Ok(written)
}

/// Parses a .dat file back into rows of fields. Used to verify round trips.
pub fn read_dat(path: &Path) -> Result<Vec<Vec<String>>> {
    let text = std::fs::read_to_string(path)?;
    Ok(text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect())
}
