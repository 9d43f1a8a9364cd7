//! Minimal CSV layer: RFC-4180 quoting, '.' decimals, mandatory header row,
//! plus leading '#' comment lines that carry tool version, config hash, and
//! defaults. Newlines are '\n' so output bytes are platform-independent.

use std::path::Path;

use i2i_core::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct CsvFile {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Shortest decimal form that parses back to the same f64.
pub fn fmt_f64(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        // keep integral values readable: 8 not 8.0
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn needs_quoting(field: &str) -> bool {
    field.contains(',') || field.contains('"') || field.contains('\n') || field.contains('\r')
}

fn write_field(out: &mut String, field: &str) {
    if needs_quoting(field) {
        out.push('"');
        for c in field.chars() {
            if c == '"' {
                out.push('"');
            }
            out.push(c);
        }
        out.push('"');
    } else {
        out.push_str(field);
    }
}

pub fn render_csv(comments: &[String], header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    for (i, h) in header.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_field(&mut out, h);
    }
    out.push('\n');
    for row in rows {
        for (i, f) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_field(&mut out, f);
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(
    path: &Path,
    comments: &[String],
    header: &[String],
    rows: &[Vec<String>],
) -> Result<()> {
    std::fs::write(path, render_csv(comments, header, rows))?;
    Ok(())
}

fn split_record(line: &str, line_no: usize) -> Result<Vec<String>> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut chars = line.chars().peekable();
    loop {
        match chars.next() {
            None => {
                fields.push(field);
                return Ok(fields);
            }
            Some(',') => fields.push(std::mem::take(&mut field)),
            Some('"') => {
                if !field.is_empty() {
                    return Err(Error::InvalidArgument(format!(
                        "line {line_no}: quote inside unquoted field"
                    )));
                }
                loop {
                    match chars.next() {
                        None => {
                            return Err(Error::InvalidArgument(format!(
                                "line {line_no}: unterminated quoted field"
                            )))
                        }
                        Some('"') => {
                            if chars.peek() == Some(&'"') {
                                chars.next();
                                field.push('"');
                            } else {
                                break;
                            }
                        }
                        Some(c) => field.push(c),
                    }
                }
                match chars.peek() {
                    None | Some(',') => {}
                    Some(_) => {
                        return Err(Error::InvalidArgument(format!(
                            "line {line_no}: garbage after closing quote"
                        )))
                    }
                }
            }
            Some(c) => field.push(c),
        }
    }
}

pub fn parse_csv(text: &str) -> Result<CsvFile> {
    let mut file = CsvFile::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        if let Some(comment) = raw.strip_prefix('#') {
            if !file.header.is_empty() || !file.rows.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "line {line_no}: comment after data"
                )));
            }
            file.comments.push(comment.trim_start().to_string());
            continue;
        }
        if raw.is_empty() {
            continue;
        }
        let record = split_record(raw, line_no)?;
        if file.header.is_empty() {
            file.header = record;
        } else {
            if record.len() != file.header.len() {
                return Err(Error::InvalidArgument(format!(
                    "line {line_no}: {} fields, header has {}",
                    record.len(),
                    file.header.len()
                )));
            }
            file.rows.push(record);
        }
    }
    if file.header.is_empty() {
        return Err(Error::InvalidArgument("missing CSV header row".into()));
    }
    Ok(file)
}

pub fn read_csv(path: &Path) -> Result<CsvFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    parse_csv(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

/// Column lookup that names the missing column in its error.
pub fn column_index(file: &CsvFile, name: &str) -> Result<usize> {
    file.header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::InvalidArgument(format!("missing CSV column '{name}'")))
}
