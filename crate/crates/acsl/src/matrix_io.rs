//! Delimited numeric text matrices, one sample per row.
//!
//! Parsing goes through `str::parse::<f64>`, which only accepts `.` as the
//! decimal separator regardless of the process locale. Writing uses 17
//! significant digits so every `f64` survives a round trip.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use acsl_core::Matrix;
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};

/// Field separator of a matrix file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Delimiter {
    Char(char),
    /// Any run of spaces or tabs.
    Whitespace,
}

impl Default for Delimiter {
    fn default() -> Self {
        Delimiter::Char(',')
    }
}

impl TryFrom<String> for Delimiter {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        match s.as_str() {
            "whitespace" | " " => Ok(Delimiter::Whitespace),
            "\\t" | "tab" => Ok(Delimiter::Char('\t')),
            _ => {
                let mut chars = s.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Ok(Delimiter::Char(c)),
                    _ => Err(format!(
                        "delimiter must be a single character or \"whitespace\", got {s:?}"
                    )),
                }
            }
        }
    }
}

impl From<Delimiter> for String {
    fn from(d: Delimiter) -> String {
        match d {
            Delimiter::Whitespace => "whitespace".to_string(),
            Delimiter::Char('\t') => "tab".to_string(),
            Delimiter::Char(c) => c.to_string(),
        }
    }
}

impl Delimiter {
    fn split<'a>(&self, line: &'a str) -> Box<dyn Iterator<Item = &'a str> + 'a> {
        match *self {
            Delimiter::Whitespace => Box::new(line.split_whitespace()),
            Delimiter::Char(c) => Box::new(line.split(c).map(str::trim)),
        }
    }

    fn as_output(&self) -> char {
        match *self {
            Delimiter::Whitespace => ' ',
            Delimiter::Char(c) => c,
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| AppError::io(path, e))
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

/// Parses matrix text. Blank lines and `#` comments are skipped; `row` and
/// `column` in errors are 1-based positions in the file.
pub fn parse_matrix(
    text: &str,
    delimiter: Delimiter,
    has_header: bool,
    path: &Path,
) -> Result<Matrix> {
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    let mut header_pending = has_header;
    for (lineno, line) in text.lines().enumerate() {
        if is_skippable(line) {
            continue;
        }
        if header_pending {
            header_pending = false;
            continue;
        }
        let before = data.len();
        for (c, cell) in delimiter.split(line).enumerate() {
            let value: f64 = cell.parse().map_err(|_| AppError::Parse {
                path: path.to_path_buf(),
                row: lineno + 1,
                column: c + 1,
                message: format!("not a number: {cell:?}"),
            })?;
            if !value.is_finite() {
                return Err(AppError::Parse {
                    path: path.to_path_buf(),
                    row: lineno + 1,
                    column: c + 1,
                    message: format!("non-finite value {cell:?}"),
                });
            }
            data.push(value);
        }
        let width = data.len() - before;
        match cols {
            None => cols = Some(width),
            Some(w) if w != width => {
                return Err(AppError::Parse {
                    path: path.to_path_buf(),
                    row: lineno + 1,
                    column: width.min(w) + 1,
                    message: format!("row has {width} fields, earlier rows have {w}"),
                })
            }
            _ => {}
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| AppError::Parse {
        path: path.to_path_buf(),
        row: 0,
        column: 0,
        message: "file holds no data rows".to_string(),
    })?;
    Matrix::from_vec(rows, cols, data).map_err(AppError::core("reading matrix"))
}

pub fn read_matrix(path: &Path, delimiter: Delimiter, has_header: bool) -> Result<Matrix> {
    parse_matrix(&read_text(path)?, delimiter, has_header, path)
}

pub fn format_matrix(m: &Matrix, delimiter: Delimiter) -> String {
    let sep = delimiter.as_output();
    let mut out = String::with_capacity(m.rows() * m.cols() * 24);
    for i in 0..m.rows() {
        for (c, v) in m.row(i).iter().enumerate() {
            if c > 0 {
                out.push(sep);
            }
            write!(out, "{v:.16e}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix(path: &Path, m: &Matrix, delimiter: Delimiter) -> Result<()> {
    write_text(path, &format_matrix(m, delimiter))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| AppError::io(path, e))
}

/// One non-negative integer per line.
pub fn read_labels(path: &Path) -> Result<Vec<usize>> {
    read_indices(path)
}

pub fn read_indices(path: &Path) -> Result<Vec<usize>> {
    let text = read_text(path)?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if is_skippable(line) {
            continue;
        }
        let v = line.trim().parse().map_err(|_| AppError::Parse {
            path: path.to_path_buf(),
            row: lineno + 1,
            column: 1,
            message: format!("not a non-negative integer: {:?}", line.trim()),
        })?;
        out.push(v);
    }
    Ok(out)
}

pub fn write_indices(path: &Path, values: &[usize]) -> Result<()> {
    let mut text = String::with_capacity(values.len() * 4);
    for v in values {
        writeln!(text, "{v}").expect("writing to a String");
    }
    write_text(path, &text)
}
