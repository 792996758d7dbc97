//! Typed columnar tables and CSV ingestion.

use std::fmt;

use thiserror::Error;

/// Errors produced while reading or binding tabular data.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DataError {
    #[error("csv row {row}: expected {expected} fields, found {found}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate column name '{0}'")]
    DuplicateColumn(String),
    #[error("empty column name at position {0}")]
    EmptyColumnName(usize),
    #[error("csv input has no header row")]
    MissingHeader,
    #[error("csv row {row}: invalid UTF-8")]
    Utf8 { row: usize },
    #[error("csv: {0}")]
    Malformed(String),
    #[error("column '{0}' not found")]
    UnknownColumn(String),
    #[error("column '{name}' must be {expected}")]
    WrongKind { name: String, expected: ColumnKind },
    #[error("columns have mismatched lengths: '{name}' has {found}, expected {expected}")]
    LengthMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

impl fmt::Display for ColumnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnKind::Numeric => f.write_str("numeric"),
            ColumnKind::Categorical => f.write_str("categorical"),
        }
    }
}

/// A single column. `None` marks a missing cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Numeric(Vec<Option<f64>>),
    Categorical(Vec<Option<String>>),
}

impl Column {
    pub fn kind(&self) -> ColumnKind {
        match self {
            Column::Numeric(_) => ColumnKind::Numeric,
            Column::Categorical(_) => ColumnKind::Categorical,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Column::Numeric(v) => v.len(),
            Column::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_missing(&self, row: usize) -> bool {
        match self {
            Column::Numeric(v) => v[row].is_none(),
            Column::Categorical(v) => v[row].is_none(),
        }
    }

    pub fn as_numeric(&self) -> Option<&[Option<f64>]> {
        match self {
            Column::Numeric(v) => Some(v),
            Column::Categorical(_) => None,
        }
    }

    pub fn as_categorical(&self) -> Option<&[Option<String>]> {
        match self {
            Column::Categorical(v) => Some(v),
            Column::Numeric(_) => None,
        }
    }

    /// Infers a column from raw cells: numeric when every non-missing cell
    /// parses as a finite decimal number.
    pub fn infer(cells: Vec<Option<String>>) -> Column {
        let all_numeric = cells.iter().flatten().all(|c| parse_decimal(c).is_some());
        if all_numeric {
            Column::Numeric(
                cells
                    .iter()
                    .map(|c| c.as_deref().and_then(parse_decimal))
                    .collect(),
            )
        } else {
            Column::Categorical(cells)
        }
    }
}

/// Returns true for cells treated as missing: empty or the literal `NA`.
pub fn is_missing_token(cell: &str) -> bool {
    let t = cell.trim();
    t.is_empty() || t == "NA"
}

fn parse_decimal(s: &str) -> Option<f64> {
    let t = s.trim();
    // Rust's float parser also accepts "inf" / "NaN"; only plain decimals count.
    if !t
        .bytes()
        .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'))
    {
        return None;
    }
    t.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Ordered, named columns of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<(String, Column)>,
    n_rows: usize,
}

impl Dataset {
    pub fn new(columns: Vec<(String, Column)>) -> Result<Dataset, DataError> {
        let n_rows = columns.first().map(|(_, c)| c.len()).unwrap_or(0);
        for (i, (name, col)) in columns.iter().enumerate() {
            if name.is_empty() {
                return Err(DataError::EmptyColumnName(i));
            }
            if columns[..i].iter().any(|(n, _)| n == name) {
                return Err(DataError::DuplicateColumn(name.clone()));
            }
            if col.len() != n_rows {
                return Err(DataError::LengthMismatch {
                    name: name.clone(),
                    expected: n_rows,
                    found: col.len(),
                });
            }
        }
        Ok(Dataset { columns, n_rows })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &Column)> {
        self.columns.iter().map(|(n, c)| (n.as_str(), c))
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn column(&self, name: &str) -> Result<&Column, DataError> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
            .ok_or_else(|| DataError::UnknownColumn(name.to_string()))
    }

    pub fn numeric(&self, name: &str) -> Result<&[Option<f64>], DataError> {
        self.column(name)?
            .as_numeric()
            .ok_or_else(|| DataError::WrongKind {
                name: name.to_string(),
                expected: ColumnKind::Numeric,
            })
    }

    pub fn categorical(&self, name: &str) -> Result<&[Option<String>], DataError> {
        self.column(name)?
            .as_categorical()
            .ok_or_else(|| DataError::WrongKind {
                name: name.to_string(),
                expected: ColumnKind::Categorical,
            })
    }
}

/// Parses UTF-8 CSV with a header row into a typed [`Dataset`].
///
/// Quoted fields and `""` escapes follow RFC 4180; both `\n` and `\r\n`
/// line endings are accepted. Row numbers in errors are 1-based file line
/// numbers, so the header is row 1.
pub fn parse_csv(bytes: &[u8]) -> Result<Dataset, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(bytes);

    let mut records = reader.byte_records();
    let header = match records.next() {
        Some(rec) => rec.map_err(|e| DataError::Malformed(e.to_string()))?,
        None => return Err(DataError::MissingHeader),
    };
    let names: Vec<String> = header
        .iter()
        .map(|f| {
            std::str::from_utf8(f)
                .map(|s| s.trim().to_string())
                .map_err(|_| DataError::Utf8 { row: 1 })
        })
        .collect::<Result<_, _>>()?;

    let mut cells: Vec<Vec<Option<String>>> = vec![Vec::new(); names.len()];
    for (i, rec) in records.enumerate() {
        let rec = rec.map_err(|e| DataError::Malformed(e.to_string()))?;
        let row = rec.position().map(|p| p.line() as usize).unwrap_or(i + 2);
        if rec.len() != names.len() {
            return Err(DataError::Ragged {
                row,
                expected: names.len(),
                found: rec.len(),
            });
        }
        for (col, field) in cells.iter_mut().zip(rec.iter()) {
            let s = std::str::from_utf8(field).map_err(|_| DataError::Utf8 { row })?;
            col.push(if is_missing_token(s) {
                None
            } else {
                Some(s.to_string())
            });
        }
    }

    Dataset::new(
        names
            .into_iter()
            .zip(cells)
            .map(|(n, c)| (n, Column::infer(c)))
            .collect(),
    )
}

/// Writes a dataset back to CSV. Missing cells become `NA`.
pub fn serialize_csv(data: &Dataset) -> Vec<u8> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let header: Vec<&str> = data.column_names().collect();
    writer.write_record(&header).expect("write to Vec");
    for row in 0..data.n_rows() {
        let record: Vec<String> = data
            .columns()
            .map(|(_, col)| match col {
                Column::Numeric(v) => v[row]
                    .map(crate::format::number)
                    .unwrap_or_else(|| "NA".into()),
                Column::Categorical(v) => v[row].clone().unwrap_or_else(|| "NA".into()),
            })
            .collect();
        writer.write_record(&record).expect("write to Vec");
    }
    writer.into_inner().expect("flush to Vec")
}
