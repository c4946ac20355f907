//! Stream ingestion: channel schema, frame parsing, derived angle
//! channels, and sliding-window segmentation.

mod channel;
mod frame;
mod label;
mod window;

pub use channel::{angle3d, parse_channel_name, Axis, BodyPart, ChannelDescriptor, Measurement, Side, Vec3};
pub use frame::{derive_angle_channels, parse_frames, write_frames, FrameRecord, FrameStream, FRAME_PERIOD_SECONDS};
pub use label::{gesture_index, vocabulary_rank, GESTURE_VOCABULARY};
pub use window::{windowize, GestureWindow};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("no frames in input")]
    Empty,
    #[error("required column `{column}` is missing")]
    MissingColumn { column: &'static str },
    #[error("column `{column}` is not a valid channel name")]
    Schema { column: String },
    #[error("row {row}: cannot parse `{value}` in column `{column}`")]
    Value { row: usize, column: String, value: String },
    #[error("row {row}: label `{label}` is not in the gesture vocabulary")]
    Label { row: usize, label: String },
    #[error("recording `{recording_id}` appears in non-contiguous blocks")]
    RecordingNotContiguous { recording_id: String },
    #[error("recording `{recording_id}` mixes labels")]
    MixedLabels { recording_id: String },
    #[error("recording `{recording_id}` row {row}: frames are not 0.2 s apart")]
    FrameSpacing { recording_id: String, row: usize },
    #[error("angle of a zero-magnitude vector is undefined")]
    DegenerateVector,
    #[error("window length {length} is too short (minimum 2)")]
    WindowLength { length: usize },
    #[error("stride must be at least 1")]
    Stride,
}
