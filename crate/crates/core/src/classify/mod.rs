//! Classifiers and evaluation: bagged CART forest, floor baselines, and
//! stratified cross-validation.

mod baseline;
mod cv;
mod forest;
mod metrics;
mod tree;

pub use baseline::{fit_one_rule, fit_zero_rule, BaselineOutcome, OneRule, ZeroRule};
pub use cv::{cross_validate, stratified_folds, CvSummary, ForestTrainer, Predictor, Trainer, ZeroRuleTrainer};
pub use forest::{train_forest, ForestConfig, ForestModel};
pub use metrics::{mean_std, ConfusionMatrix, FoldMetrics, MeanStd};
pub use tree::DecisionTree;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("training matrix has no feature columns")]
    NoFeatures,
    #[error("forest needs at least one estimator")]
    NoEstimators,
    #[error("class {class} has {count} rows, too few for {folds} folds")]
    Stratification { class: usize, count: usize, folds: usize },
    #[error("cross-validation needs at least 2 folds, got {folds}")]
    FoldCount { folds: usize },
    #[error("model file line {line}: {reason}")]
    ModelFormat { line: usize, reason: String },
    #[error("model expects {expected} features, matrix has {found}")]
    FeatureMismatch { expected: usize, found: usize },
    #[error("model expects feature {expected:?}, matrix has {found:?}")]
    FeatureNameMismatch { expected: String, found: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
