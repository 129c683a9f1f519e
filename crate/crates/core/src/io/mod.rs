//! Matrix files, run reports and plot output.

mod mutation;
mod report;
pub mod svg;

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{FisherError, Result};
use crate::matrix::DataMatrix;

pub use mutation::{normalize_mutation_matrix, MutationNormalization, MutationSummary, DEFAULT_MIN_COUNT};
pub use report::{
    InputDescriptor, PreprocessSummary, RunReport, SweepRow, Timing, TOOL_VERSION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Delimiter {
    Comma,
    Tab,
}

impl Delimiter {
    pub fn byte(self) -> u8 {
        match self {
            Delimiter::Comma => b',',
            Delimiter::Tab => b'\t',
        }
    }

    /// Tab for `.tsv` / `.tab` files, comma otherwise.
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("tsv") || e.eq_ignore_ascii_case("tab") => {
                Delimiter::Tab
            }
            _ => Delimiter::Comma,
        }
    }
}

/// Which axis of the file holds the points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Rows,
    Columns,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub path: PathBuf,
    pub delimiter: Delimiter,
    pub orientation: Orientation,
    /// Skip the first line.
    pub header: bool,
}

impl MatrixFile {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        Self {
            delimiter: Delimiter::for_path(&path),
            path,
            orientation: Orientation::Rows,
            header: false,
        }
    }

    pub fn with_header(mut self, header: bool) -> Self {
        self.header = header;
        self
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_delimiter(mut self, delimiter: Delimiter) -> Self {
        self.delimiter = delimiter;
        self
    }
}

/// Reads a delimited numeric matrix and returns it with points as rows.
pub fn load_matrix(f: &MatrixFile) -> Result<DataMatrix> {
    let file = File::open(&f.path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", f.path.display())))?;
    parse_matrix(file, f.delimiter, f.orientation, f.header)
}

/// [`load_matrix`] on any reader. Line numbers in errors are 1-based and
/// count the header.
pub fn parse_matrix<R: Read>(
    reader: R,
    delimiter: Delimiter,
    orientation: Orientation,
    header: bool,
) -> Result<DataMatrix> {
    let delim = char::from(delimiter.byte());
    let mut values = Vec::new();
    let mut width = None;
    let mut rows = 0usize;
    let mut last_line = 0usize;
    let mut skip_header = header;
    for (idx, text) in BufReader::new(reader).lines().enumerate() {
        let line = idx + 1;
        let text = text.map_err(|e| FisherError::Parse { line, msg: e.to_string() })?;
        if text.trim().is_empty() {
            continue;
        }
        last_line = line;
        if std::mem::take(&mut skip_header) {
            continue;
        }
        let cells: Vec<&str> = text.split(delim).map(str::trim).collect();
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(FisherError::Parse {
                    line,
                    msg: format!("expected {w} fields, found {}", cells.len()),
                })
            }
            _ => {}
        }
        for (col, cell) in cells.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| FisherError::Parse {
                line,
                msg: format!("column {}: '{cell}' is not a number", col + 1),
            })?;
            if !v.is_finite() {
                return Err(FisherError::Parse {
                    line,
                    msg: format!("column {}: non-finite value '{cell}'", col + 1),
                });
            }
            values.push(v);
        }
        rows += 1;
    }
    let cols = match width {
        Some(w) if w > 0 => w,
        _ => {
            return Err(FisherError::Parse {
                line: last_line.max(1),
                msg: "no data rows".into(),
            })
        }
    };
    let as_read = DataMatrix::new(rows, cols, values).map_err(|e| FisherError::Parse {
        line: last_line,
        msg: e.to_string(),
    });
    match orientation {
        Orientation::Rows => as_read,
        Orientation::Columns => as_read?.transpose().map_err(|e| FisherError::Parse {
            line: last_line,
            msg: e.to_string(),
        }),
    }
}

/// Writes `x` as CSV with shortest round-trip float formatting, so reading
/// it back with [`load_matrix`] reproduces every value exactly.
pub fn write_matrix_csv<W: Write>(x: &DataMatrix, out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    let mut line = String::new();
    for r in x.rows() {
        line.clear();
        for (j, v) in r.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&v.to_string());
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_matrix_csv(x: &DataMatrix, path: &Path) -> Result<()> {
    write_matrix_csv(x, File::create(path)?)
}

/// A small CSV table with a header row.
pub fn write_table<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| FisherError::Io(std::io::Error::other(e));
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Formats an optional number, empty when absent.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
