//! Synthetic data generation and the early-fusion sweep harness.

mod grid;
mod sweep;
mod synth;

pub use grid::{enumerate_grid, GridKind, STEP};
pub use sweep::{
    early_fuse, run_sweep, write_sweep_outputs, SweepConfig, SweepFailure, SweepOutcome,
    SweepReport,
};
pub use synth::{channel_catalog, generate_synth, SynthConfig, SynthInfo, SynthProfile};

use crate::classify::ClassifyError;
use crate::features::FeatureError;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("bad configuration: {reason}")]
    Config { reason: String },
    #[error("column budget {limit} is below the grid step")]
    GridLimit { limit: usize },
    #[error("unknown grid kind {name:?}")]
    UnknownGrid { name: String },
    #[error("unknown synth profile {name:?}")]
    UnknownProfile { name: String },
    #[error("requested top {requested} {domain} columns but only {available} are ranked")]
    RankBudget { requested: usize, available: usize, domain: &'static str },
    #[error("ranked column {name:?} is missing from the feature matrix")]
    MissingColumn { name: String },
    #[error("fusion of zero statistical and zero temporal columns")]
    EmptyFusion,
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
