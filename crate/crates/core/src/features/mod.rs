//! Feature matrices: windows as rows, named feature columns, CSV round-trip.

mod statistical;
mod temporal;

pub use statistical::{extract_statistical, statistical_layout, StatOptions, HISTOGRAM_BINS};
pub use temporal::{extract_temporal, temporal_layout, NEIGHBOURHOOD_RADIUS};

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::ingest::{vocabulary_rank, FrameStream, GestureWindow};
use crate::text::{fmt_f64, parse_f64};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("window of {length} samples is too short for feature extraction")]
    WindowTooShort { length: usize },
    #[error("{samples} samples but {timestamps} timestamps")]
    ShapeMismatch { samples: usize, timestamps: usize },
    #[error("timestamps must be strictly increasing")]
    TimeOrder,
    #[error("no windows to extract from")]
    NoWindows,
    #[error("unknown channel {name:?}")]
    UnknownChannel { name: String },
    #[error("column count mismatch: {expected} expected, {found} found")]
    ColumnCount { expected: usize, found: usize },
    #[error("row {row}: bad value {value:?} in column {column:?}")]
    Value { row: usize, column: String, value: String },
    #[error("matrix file is malformed: {reason}")]
    Format { reason: String },
    #[error("matrices do not share row identity at row {row}: {left:?} vs {right:?}")]
    RowMismatch { row: usize, left: String, right: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Which half of the feature catalog a column came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainTag {
    Statistical,
    SpatioTemporal,
}

impl DomainTag {
    pub fn as_str(self) -> &'static str {
        match self {
            DomainTag::Statistical => "statistical",
            DomainTag::SpatioTemporal => "spatio_temporal",
        }
    }

    pub fn layout(self, window_len: usize, opts: &StatOptions) -> Vec<(&'static str, Option<u32>)> {
        match self {
            DomainTag::Statistical => statistical_layout(window_len, opts),
            DomainTag::SpatioTemporal => temporal_layout(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FeatureColumn {
    pub stable_name: String,
    pub domain: DomainTag,
    pub family: String,
    pub channel: String,
}

impl FeatureColumn {
    fn new(channel: &str, family: &str, sub: Option<u32>, domain: DomainTag) -> Self {
        let stable_name = match sub {
            Some(k) => format!("{channel}__{family}_{k}"),
            None => format!("{channel}__{family}"),
        };
        FeatureColumn { stable_name, domain, family: family.to_string(), channel: channel.to_string() }
    }

    /// Recovers channel and family from a stable name read back from disk.
    fn from_stable_name(name: &str, domain: DomainTag) -> Result<Self, FeatureError> {
        let (channel, tail) = name
            .split_once("__")
            .ok_or_else(|| FeatureError::Format { reason: format!("column {name:?} has no channel separator") })?;
        // strip a trailing sub-index if the remainder matches a known family
        let family = match tail.rsplit_once('_') {
            Some((stem, suffix)) if suffix.chars().all(|c| c.is_ascii_digit()) && is_known_family(stem) => stem,
            _ => tail,
        };
        Ok(FeatureColumn {
            stable_name: name.to_string(),
            domain,
            family: family.to_string(),
            channel: channel.to_string(),
        })
    }
}

fn is_known_family(name: &str) -> bool {
    statistical_layout(2, &StatOptions::default())
        .iter()
        .chain(temporal_layout().iter())
        .any(|(f, _)| *f == name)
}

/// Row-major matrix of feature values with row identity (window, label)
/// and a class vocabulary shared by any subset taken from it.
#[derive(Clone, Debug)]
pub struct FeatureMatrix {
    pub columns: Vec<FeatureColumn>,
    pub window_ids: Vec<String>,
    pub labels: Vec<String>,
    /// Distinct labels in gesture-vocabulary order.
    pub classes: Vec<String>,
    /// Per-row index into `classes`.
    pub class_ids: Vec<usize>,
    values: Vec<f64>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.window_ids.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.values[r * self.n_cols()..(r + 1) * self.n_cols()]
    }

    pub fn value(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.n_cols() + c]
    }

    pub fn column_values(&self, c: usize) -> Vec<f64> {
        (0..self.n_rows()).map(|r| self.value(r, c)).collect()
    }

    pub fn column_index(&self, stable_name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.stable_name == stable_name)
    }

    fn from_parts(
        columns: Vec<FeatureColumn>,
        window_ids: Vec<String>,
        labels: Vec<String>,
        values: Vec<f64>,
    ) -> Self {
        let mut classes: Vec<String> = labels.to_vec();
        classes.sort_by(|a, b| vocabulary_rank(a).cmp(&vocabulary_rank(b)));
        classes.dedup();
        let class_ids = labels
            .iter()
            .map(|l| classes.iter().position(|c| c == l).expect("label in classes"))
            .collect();
        FeatureMatrix { columns, window_ids, labels, classes, class_ids, values }
    }

    /// New matrix with the given columns, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<FeatureMatrix, FeatureError> {
        for &c in indices {
            if c >= self.n_cols() {
                return Err(FeatureError::ColumnCount { expected: self.n_cols(), found: c });
            }
        }
        let columns = indices.iter().map(|&c| self.columns[c].clone()).collect();
        let mut values = Vec::with_capacity(self.n_rows() * indices.len());
        for r in 0..self.n_rows() {
            let row = self.row(r);
            values.extend(indices.iter().map(|&c| row[c]));
        }
        Ok(FeatureMatrix {
            columns,
            window_ids: self.window_ids.clone(),
            labels: self.labels.clone(),
            classes: self.classes.clone(),
            class_ids: self.class_ids.clone(),
            values,
        })
    }

    /// New matrix with the given rows. The class vocabulary is inherited
    /// unchanged so class ids stay comparable across subsets.
    pub fn subset_rows(&self, indices: &[usize]) -> FeatureMatrix {
        let mut values = Vec::with_capacity(indices.len() * self.n_cols());
        for &r in indices {
            values.extend_from_slice(self.row(r));
        }
        FeatureMatrix {
            columns: self.columns.clone(),
            window_ids: indices.iter().map(|&r| self.window_ids[r].clone()).collect(),
            labels: indices.iter().map(|&r| self.labels[r].clone()).collect(),
            classes: self.classes.clone(),
            class_ids: indices.iter().map(|&r| self.class_ids[r]).collect(),
            values,
        }
    }

    /// Column-wise concatenation. Rows must agree on window id and label.
    pub fn hstack(left: &FeatureMatrix, right: &FeatureMatrix) -> Result<FeatureMatrix, FeatureError> {
        if left.n_rows() != right.n_rows() {
            return Err(FeatureError::Format {
                reason: format!("row counts differ: {} vs {}", left.n_rows(), right.n_rows()),
            });
        }
        for r in 0..left.n_rows() {
            if left.window_ids[r] != right.window_ids[r] || left.labels[r] != right.labels[r] {
                return Err(FeatureError::RowMismatch {
                    row: r,
                    left: format!("{}/{}", left.window_ids[r], left.labels[r]),
                    right: format!("{}/{}", right.window_ids[r], right.labels[r]),
                });
            }
        }
        let mut columns = left.columns.clone();
        columns.extend(right.columns.iter().cloned());
        let mut values = Vec::with_capacity(left.values.len() + right.values.len());
        for r in 0..left.n_rows() {
            values.extend_from_slice(left.row(r));
            values.extend_from_slice(right.row(r));
        }
        Ok(FeatureMatrix::from_parts(columns, left.window_ids.clone(), left.labels.clone(), values))
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), FeatureError> {
        let mut w = BufWriter::new(File::create(path)?);
        let mut header = String::from("window_id,label");
        for col in &self.columns {
            header.push(',');
            header.push_str(&col.stable_name);
        }
        writeln!(w, "{header}")?;
        for r in 0..self.n_rows() {
            write!(w, "{},{}", self.window_ids[r], self.labels[r])?;
            for v in self.row(r) {
                write!(w, ",{}", fmt_f64(*v))?;
            }
            writeln!(w)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(path: &Path, domain: DomainTag) -> Result<FeatureMatrix, FeatureError> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(BufReader::new(File::open(path)?));
        let headers = reader.headers()?.clone();
        if headers.len() < 2 || &headers[0] != "window_id" || &headers[1] != "label" {
            return Err(FeatureError::Format { reason: "expected window_id,label leading columns".into() });
        }
        let columns: Vec<FeatureColumn> = headers
            .iter()
            .skip(2)
            .map(|name| FeatureColumn::from_stable_name(name, domain))
            .collect::<Result<_, _>>()?;
        let mut window_ids = Vec::new();
        let mut labels = Vec::new();
        let mut values = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != headers.len() {
                return Err(FeatureError::ColumnCount { expected: headers.len(), found: record.len() });
            }
            window_ids.push(record[0].to_string());
            labels.push(record[1].to_string());
            for (j, cell) in record.iter().skip(2).enumerate() {
                values.push(parse_f64(cell).ok_or_else(|| FeatureError::Value {
                    row: i,
                    column: columns[j].stable_name.clone(),
                    value: cell.to_string(),
                })?);
            }
        }
        Ok(FeatureMatrix::from_parts(columns, window_ids, labels, values))
    }
}

/// Extracts one domain's features for every window over the named
/// channels. Columns are channel-major: all families for the first
/// channel, then the next.
pub fn extract_matrix(
    stream: &FrameStream,
    windows: &[GestureWindow],
    channel_names: &[String],
    domain: DomainTag,
    opts: &StatOptions,
) -> Result<FeatureMatrix, FeatureError> {
    if windows.is_empty() {
        return Err(FeatureError::NoWindows);
    }
    let channel_indices: Vec<usize> = channel_names
        .iter()
        .map(|name| {
            stream
                .channel_index(name)
                .ok_or_else(|| FeatureError::UnknownChannel { name: name.clone() })
        })
        .collect::<Result<_, _>>()?;

    let window_len = windows[0].len;
    let layout = domain.layout(window_len, opts);
    let mut columns = Vec::with_capacity(channel_names.len() * layout.len());
    for name in channel_names {
        for (family, sub) in &layout {
            columns.push(FeatureColumn::new(name, family, *sub, domain));
        }
    }

    let rows: Vec<Vec<f64>> = windows
        .par_iter()
        .map(|window| {
            let mut samples = Vec::with_capacity(window.len);
            let mut timestamps = Vec::with_capacity(window.len);
            window.timestamps(stream, &mut timestamps);
            let mut row = Vec::with_capacity(columns.len());
            for &ch in &channel_indices {
                window.samples(stream, ch, &mut samples);
                let features = match domain {
                    DomainTag::Statistical => extract_statistical(&samples, &timestamps, opts)?,
                    DomainTag::SpatioTemporal => extract_temporal(&samples, &timestamps)?,
                };
                row.extend_from_slice(&features);
            }
            Ok(row)
        })
        .collect::<Result<_, FeatureError>>()?;

    let mut values = Vec::with_capacity(windows.len() * columns.len());
    for row in rows {
        if row.len() != columns.len() {
            return Err(FeatureError::ColumnCount { expected: columns.len(), found: row.len() });
        }
        values.extend(row);
    }
    let window_ids = windows.iter().map(|w| w.window_id.clone()).collect();
    let labels = windows.iter().map(|w| w.label.clone()).collect();
    Ok(FeatureMatrix::from_parts(columns, window_ids, labels, values))
}

/// Writes the column manifest: stable name, domain, family, channel.
pub fn write_manifest(path: &Path, columns: &[FeatureColumn]) -> Result<(), FeatureError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "stable_name,domain_tag,family,channel")?;
    for col in columns {
        writeln!(w, "{},{},{},{}", col.stable_name, col.domain.as_str(), col.family, col.channel)?;
    }
    w.flush()?;
    Ok(())
}
