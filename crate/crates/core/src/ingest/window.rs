//! Sliding-window segmentation. Windows never span recording boundaries
//! and trailing frames that cannot fill a window are dropped.

use super::frame::FrameStream;
use super::IngestError;

/// A fixed-length run of frames inside one recording. `start`/`len` index
/// into the owning stream's frame list.
#[derive(Clone, Debug, PartialEq)]
pub struct GestureWindow {
    pub window_id: String,
    pub recording_id: String,
    pub label: String,
    pub start: usize,
    pub len: usize,
}

impl GestureWindow {
    /// Channel samples for this window, in frame order.
    pub fn samples(&self, stream: &FrameStream, channel: usize, out: &mut Vec<f64>) {
        out.clear();
        for f in &stream.frames[self.start..self.start + self.len] {
            out.push(f.values[channel]);
        }
    }

    pub fn timestamps(&self, stream: &FrameStream, out: &mut Vec<f64>) {
        out.clear();
        for f in &stream.frames[self.start..self.start + self.len] {
            out.push(f.timestamp);
        }
    }
}

/// Cuts sliding windows of `length` frames advancing by `stride` within
/// each recording. A recording with mixed labels is an integrity error.
pub fn windowize(stream: &FrameStream, length: usize, stride: usize) -> Result<Vec<GestureWindow>, IngestError> {
    if length < 2 {
        return Err(IngestError::WindowLength { length });
    }
    if stride < 1 {
        return Err(IngestError::Stride);
    }

    let mut windows = Vec::new();
    let mut run_start = 0;
    while run_start < stream.frames.len() {
        let recording_id = &stream.frames[run_start].recording_id;
        let label = &stream.frames[run_start].label;
        let mut run_end = run_start + 1;
        while run_end < stream.frames.len() && stream.frames[run_end].recording_id == *recording_id {
            if stream.frames[run_end].label != *label {
                return Err(IngestError::MixedLabels { recording_id: recording_id.clone() });
            }
            run_end += 1;
        }

        let run_len = run_end - run_start;
        let mut offset = 0;
        while offset + length <= run_len {
            let start = run_start + offset;
            windows.push(GestureWindow {
                window_id: format!("{}:{}", recording_id, stream.frames[start].frame_index),
                recording_id: recording_id.clone(),
                label: label.clone(),
                start,
                len: length,
            });
            offset += stride;
        }
        run_start = run_end;
    }
    Ok(windows)
}
