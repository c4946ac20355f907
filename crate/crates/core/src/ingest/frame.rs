//! Frame-stream parsing, validation, and writing.
//!
//! Input is UTF-8 CSV with a header row: required columns `recording_id`
//! and `label`, an optional `timestamp`, and any number of channel columns
//! (see [`super::channel`] for the naming grammar). Frames are sampled at
//! 5 Hz; when no timestamp column is present, timestamps are derived as
//! `frame_index * 0.2`.

use std::io::{Read, Write};

use super::channel::{angle3d, parse_channel_name, Axis, ChannelDescriptor, Measurement, Vec3};
use super::label::gesture_index;
use super::IngestError;
use crate::text::{fmt_f64, parse_f64};

pub const FRAME_PERIOD_SECONDS: f64 = 0.2;
const SPACING_TOLERANCE: f64 = 1e-6;

/// One sampled frame. `values` is aligned with the owning stream's schema.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameRecord {
    pub recording_id: String,
    pub frame_index: usize,
    pub timestamp: f64,
    pub label: String,
    pub values: Vec<f64>,
}

/// A parsed stream: channel schema plus frames grouped by recording in
/// input order.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameStream {
    pub channels: Vec<ChannelDescriptor>,
    pub frames: Vec<FrameRecord>,
}

impl FrameStream {
    pub fn channel_index(&self, stable_name: &str) -> Option<usize> {
        self.channels.iter().position(|c| c.stable_name == stable_name)
    }

    /// Distinct labels in vocabulary order.
    pub fn present_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = Vec::new();
        for f in &self.frames {
            if !labels.contains(&f.label) {
                labels.push(f.label.clone());
            }
        }
        labels.sort_by_key(|l| gesture_index(l).unwrap_or(usize::MAX));
        labels
    }
}

fn validate_id(id: &str, row: usize) -> Result<(), IngestError> {
    if id.is_empty() || id.contains(',') || id.contains('"') || id.contains('\n') || id.contains('\r') {
        return Err(IngestError::Value {
            row,
            column: "recording_id".to_string(),
            value: id.to_string(),
        });
    }
    Ok(())
}

/// Parses a conforming CSV stream. Row numbers in errors are 1-based data
/// rows (the header is row 0).
pub fn parse_frames(reader: impl Read) -> Result<FrameStream, IngestError> {
    let mut csv = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = csv.headers().map_err(IngestError::from)?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(IngestError::Empty);
    }

    let mut recording_col = None;
    let mut label_col = None;
    let mut timestamp_col = None;
    let mut channel_cols: Vec<(usize, ChannelDescriptor)> = Vec::new();
    for (i, name) in headers.iter().enumerate() {
        match name {
            "recording_id" => recording_col = Some(i),
            "label" => label_col = Some(i),
            "timestamp" => timestamp_col = Some(i),
            other => channel_cols.push((i, parse_channel_name(other)?)),
        }
    }
    let recording_col = recording_col.ok_or(IngestError::MissingColumn { column: "recording_id" })?;
    let label_col = label_col.ok_or(IngestError::MissingColumn { column: "label" })?;

    let mut channels: Vec<ChannelDescriptor> = Vec::with_capacity(channel_cols.len());
    for (_, d) in &channel_cols {
        if channels.iter().any(|c| c.stable_name == d.stable_name) {
            return Err(IngestError::Schema { column: d.stable_name.clone() });
        }
        channels.push(d.clone());
    }

    let mut frames: Vec<FrameRecord> = Vec::new();
    let mut finished_recordings: Vec<String> = Vec::new();
    let mut current: Option<String> = None;
    let mut frame_index = 0usize;

    for (row_zero, record) in csv.records().enumerate() {
        let row = row_zero + 1;
        let record = record.map_err(IngestError::from)?;

        let recording_id = record.get(recording_col).unwrap_or("").to_string();
        validate_id(&recording_id, row)?;
        if current.as_deref() != Some(recording_id.as_str()) {
            if finished_recordings.contains(&recording_id) {
                return Err(IngestError::RecordingNotContiguous { recording_id });
            }
            if let Some(prev) = current.take() {
                finished_recordings.push(prev);
            }
            current = Some(recording_id.clone());
            frame_index = 0;
        }

        let label = record.get(label_col).unwrap_or("").to_string();
        if gesture_index(&label).is_none() {
            return Err(IngestError::Label { row, label });
        }

        let timestamp = match timestamp_col {
            Some(col) => {
                let raw = record.get(col).unwrap_or("");
                parse_f64(raw).filter(|v| v.is_finite()).ok_or_else(|| IngestError::Value {
                    row,
                    column: "timestamp".to_string(),
                    value: raw.to_string(),
                })?
            }
            None => frame_index as f64 * FRAME_PERIOD_SECONDS,
        };
        if timestamp_col.is_some() && frame_index > 0 {
            let prev = frames.last().expect("frame_index > 0 implies a previous frame");
            let gap = timestamp - prev.timestamp;
            if (gap - FRAME_PERIOD_SECONDS).abs() > SPACING_TOLERANCE {
                return Err(IngestError::FrameSpacing { recording_id, row });
            }
        }

        let mut values = Vec::with_capacity(channel_cols.len());
        for (col, descriptor) in &channel_cols {
            let raw = record.get(*col).unwrap_or("");
            let value = parse_f64(raw).filter(|v| v.is_finite()).ok_or_else(|| IngestError::Value {
                row,
                column: descriptor.stable_name.clone(),
                value: raw.to_string(),
            })?;
            values.push(value);
        }

        frames.push(FrameRecord { recording_id, frame_index, timestamp, label, values });
        frame_index += 1;
    }
    if frames.is_empty() {
        return Err(IngestError::Empty);
    }

    Ok(FrameStream { channels, frames })
}

/// Writes a stream back to CSV. Output always carries an explicit
/// timestamp column so `parse(write(x)) == x` bit for bit.
pub fn write_frames(stream: &FrameStream, mut out: impl Write) -> std::io::Result<()> {
    write!(out, "recording_id,timestamp,label")?;
    for c in &stream.channels {
        write!(out, ",{}", c.stable_name)?;
    }
    writeln!(out)?;
    for f in &stream.frames {
        write!(out, "{},{},{}", f.recording_id, fmt_f64(f.timestamp), f.label)?;
        for v in &f.values {
            write!(out, ",{}", fmt_f64(*v))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Finds (side, body part, qualifier) groups that carry complete
/// start/end position triples and appends a derived `angle3d` channel for
/// each: the angle between the start and end position vectors per frame.
/// Groups that already have an explicit angle channel are left alone.
pub fn derive_angle_channels(mut stream: FrameStream) -> Result<FrameStream, IngestError> {
    struct Group {
        start: [Option<usize>; 3],
        end: [Option<usize>; 3],
        prototype: usize,
    }
    let mut order: Vec<String> = Vec::new();
    let mut groups: Vec<Group> = Vec::new();

    for (idx, c) in stream.channels.iter().enumerate() {
        let slot = match c.measurement {
            Measurement::StartPosition | Measurement::EndPosition => match c.axis {
                Axis::X => 0,
                Axis::Y => 1,
                Axis::Z => 2,
                Axis::Scalar => continue,
            },
            _ => continue,
        };
        let key = format!(
            "{}_{}{}",
            c.side.as_str(),
            c.body_part.as_str(),
            c.qualifier.as_deref().map(|q| format!("_{q}")).unwrap_or_default()
        );
        let gi = match order.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                order.push(key);
                groups.push(Group { start: [None; 3], end: [None; 3], prototype: idx });
                groups.len() - 1
            }
        };
        let group = &mut groups[gi];
        match c.measurement {
            Measurement::StartPosition => group.start[slot] = Some(idx),
            Measurement::EndPosition => group.end[slot] = Some(idx),
            _ => unreachable!(),
        }
    }

    for group in &groups {
        let (Some(sx), Some(sy), Some(sz)) = (group.start[0], group.start[1], group.start[2]) else {
            continue;
        };
        let (Some(ex), Some(ey), Some(ez)) = (group.end[0], group.end[1], group.end[2]) else {
            continue;
        };
        let proto = &stream.channels[group.prototype];
        let derived = ChannelDescriptor::new(
            proto.side,
            proto.body_part,
            proto.qualifier.as_deref(),
            Measurement::Angle3d,
            Axis::Scalar,
        );
        if stream.channel_index(&derived.stable_name).is_some() {
            continue;
        }
        let mut column = Vec::with_capacity(stream.frames.len());
        for f in &stream.frames {
            let a = Vec3::new(f.values[sx], f.values[sy], f.values[sz]);
            let b = Vec3::new(f.values[ex], f.values[ey], f.values[ez]);
            column.push(angle3d(a, b)?);
        }
        stream.channels.push(derived);
        for (f, v) in stream.frames.iter_mut().zip(column) {
            f.values.push(v);
        }
    }
    Ok(stream)
}
