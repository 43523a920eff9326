//! In-memory columnar datasets and CSV ingestion.

use std::collections::HashMap;
use std::path::Path;

use serde::Serialize;

use crate::binning::Column;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureColumn {
    pub name: String,
    pub data: Column,
    /// Cells that were present but could not be parsed; stored as missing.
    pub unparseable: usize,
}

impl FeatureColumn {
    pub fn new(name: impl Into<String>, data: Column) -> Self {
        Self {
            name: name.into(),
            data,
            unparseable: 0,
        }
    }

    pub fn kind(&self) -> ColumnKind {
        match self.data {
            Column::Numeric(_) => ColumnKind::Numeric,
            Column::Categorical(_) => ColumnKind::Categorical,
        }
    }

    /// Reason the column cannot be tested, if any.
    pub fn unusable_reason(&self) -> Option<String> {
        let present = (0..self.data.len())
            .filter(|&i| !self.data.is_missing(i))
            .count();
        if present > 0 {
            None
        } else if self.unparseable > 0 {
            Some(format!(
                "all {} non-empty cells are unparseable",
                self.unparseable
            ))
        } else {
            Some("column has no values".into())
        }
    }
}

/// A binary target plus feature columns of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub target_name: String,
    /// `None` where the target cell was empty or not a recognised label.
    pub target: Vec<Option<u8>>,
    pub features: Vec<FeatureColumn>,
}

impl Dataset {
    pub fn new(
        target_name: impl Into<String>,
        target: Vec<Option<u8>>,
        features: Vec<FeatureColumn>,
    ) -> Result<Self> {
        let target_name = target_name.into();
        if target.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(f) = features.iter().find(|f| f.data.len() != target.len()) {
            return Err(Error::InvalidArgument(format!(
                "column '{}' has {} rows, target has {}",
                f.name,
                f.data.len(),
                target.len()
            )));
        }
        if target.iter().flatten().any(|&y| y > 1) {
            return Err(Error::InvalidArgument(
                "target labels must be 0 or 1".into(),
            ));
        }
        let ds = Self {
            target_name,
            target,
            features,
        };
        if ds.events() == 0 || ds.non_events() == 0 {
            return Err(Error::DegenerateTarget(format!(
                "column '{}' has {} events and {} non-events",
                ds.target_name,
                ds.events(),
                ds.non_events()
            )));
        }
        Ok(ds)
    }

    /// Convenience constructor from `(name, column)` pairs.
    pub fn from_columns(
        target_name: impl Into<String>,
        target: Vec<Option<u8>>,
        columns: Vec<(String, Column)>,
    ) -> Result<Self> {
        let features = columns
            .into_iter()
            .map(|(n, c)| FeatureColumn::new(n, c))
            .collect();
        Self::new(target_name, target, features)
    }

    /// Total rows, including rows with an unusable target.
    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn events(&self) -> u64 {
        self.target.iter().filter(|&&y| y == Some(1)).count() as u64
    }

    pub fn non_events(&self) -> u64 {
        self.target.iter().filter(|&&y| y == Some(0)).count() as u64
    }

    /// Rows left out because the target is missing.
    pub fn excluded_rows(&self) -> usize {
        self.target.iter().filter(|y| y.is_none()).count()
    }

    pub fn feature(&self, name: &str) -> Option<&FeatureColumn> {
        self.features.iter().find(|f| f.name == name)
    }
}

const MISSING_TOKENS: &[&str] = &["", "na", "n/a", "nan", "null", "none"];

fn is_missing_token(s: &str) -> bool {
    let t = s.trim();
    MISSING_TOKENS.iter().any(|m| t.eq_ignore_ascii_case(m))
}

/// Accepts `0`/`1` and `true`/`false` (any case).
pub fn parse_target(s: &str) -> Option<u8> {
    let t = s.trim();
    if t == "1" || t.eq_ignore_ascii_case("true") {
        Some(1)
    } else if t == "0" || t.eq_ignore_ascii_case("false") {
        Some(0)
    } else {
        None
    }
}

fn parse_number(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|x| x.is_finite())
}

fn build_column(cells: &[String], kind: Option<ColumnKind>) -> (Column, usize) {
    let kind = kind.unwrap_or_else(|| {
        let present: Vec<&String> = cells.iter().filter(|c| !is_missing_token(c)).collect();
        let numeric = present.iter().filter(|c| parse_number(c).is_some()).count();
        if numeric > 0 && 2 * numeric > present.len() {
            ColumnKind::Numeric
        } else {
            ColumnKind::Categorical
        }
    });
    match kind {
        ColumnKind::Numeric => {
            let mut bad = 0;
            let v = cells
                .iter()
                .map(|c| {
                    if is_missing_token(c) {
                        return None;
                    }
                    let x = parse_number(c);
                    if x.is_none() {
                        bad += 1;
                    }
                    x
                })
                .collect();
            (Column::Numeric(v), bad)
        }
        ColumnKind::Categorical => {
            let v = cells
                .iter()
                .map(|c| (!is_missing_token(c)).then(|| c.trim().to_string()))
                .collect();
            (Column::Categorical(v), 0)
        }
    }
}

/// Reads a headed, RFC 4180 CSV file into a [`Dataset`].
///
/// `feature_columns == None` selects every column except the target.
/// Columns without a type hint are numeric when most present cells parse as
/// numbers (with `.` as the decimal point) and categorical otherwise.
pub fn ingest_csv(
    path: impl AsRef<Path>,
    target_column: &str,
    feature_columns: Option<&[String]>,
    type_hints: &HashMap<String, ColumnKind>,
) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let headers: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(Error::EmptyInput);
    }
    let target_idx = headers
        .iter()
        .position(|h| h == target_column)
        .ok_or_else(|| Error::MissingColumn(target_column.to_string()))?;
    let feature_idx: Vec<usize> = match feature_columns {
        Some(names) => names
            .iter()
            .map(|n| {
                headers
                    .iter()
                    .position(|h| h == n)
                    .ok_or_else(|| Error::MissingColumn(n.clone()))
            })
            .collect::<Result<_>>()?,
        None => (0..headers.len()).filter(|&i| i != target_idx).collect(),
    };

    let mut cells: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
    for record in reader.records() {
        let record = record?;
        for (i, col) in cells.iter_mut().enumerate() {
            col.push(record.get(i).unwrap_or("").to_string());
        }
    }
    if cells[target_idx].is_empty() {
        return Err(Error::EmptyInput);
    }

    let target = cells[target_idx].iter().map(|c| parse_target(c)).collect();
    let features = feature_idx
        .into_iter()
        .map(|i| {
            let (data, unparseable) = build_column(&cells[i], type_hints.get(&headers[i]).copied());
            FeatureColumn {
                name: headers[i].clone(),
                data,
                unparseable,
            }
        })
        .collect();
    Dataset::new(target_column, target, features)
}
