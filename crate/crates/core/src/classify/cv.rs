//! Stratified k-fold cross-validation over a feature matrix.

use rand::seq::SliceRandom;

use super::baseline::{fit_zero_rule, ZeroRule};
use super::forest::{train_forest, ForestConfig, ForestModel};
use super::metrics::{mean_std, ConfusionMatrix, FoldMetrics, MeanStd};
use super::ClassifyError;
use crate::features::FeatureMatrix;
use crate::seed::{substream, Domain};

/// Splits row indices into `k` folds with per-class proportions intact.
/// Classes are processed in id order through a single shuffle stream, so
/// the folds are a pure function of (labels, k, seed). Fold sizes within
/// a class differ by at most one, larger chunks first.
pub fn stratified_folds(class_ids: &[usize], n_classes: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>, ClassifyError> {
    if k < 2 {
        return Err(ClassifyError::FoldCount { folds: k });
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (row, &c) in class_ids.iter().enumerate() {
        by_class[c].push(row);
    }
    for (c, rows) in by_class.iter().enumerate() {
        if !rows.is_empty() && rows.len() < k {
            return Err(ClassifyError::Stratification { class: c, count: rows.len(), folds: k });
        }
    }
    let mut rng = substream(seed, Domain::FoldShuffle, 0);
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    for rows in by_class.iter_mut() {
        rows.shuffle(&mut rng);
        let q = rows.len() / k;
        let r = rows.len() % k;
        let mut at = 0;
        for (i, fold) in folds.iter_mut().enumerate() {
            let take = q + usize::from(i < r);
            fold.extend_from_slice(&rows[at..at + take]);
            at += take;
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// Anything that can be fit on a training matrix and then asked to label
/// single rows.
pub trait Trainer {
    type Model: Predictor;
    fn train(&self, matrix: &FeatureMatrix) -> Result<Self::Model, ClassifyError>;
}

pub trait Predictor {
    fn predict_row(&self, row: &[f64]) -> usize;
}

#[derive(Clone, Copy, Debug)]
pub struct ForestTrainer {
    pub config: ForestConfig,
}

impl Trainer for ForestTrainer {
    type Model = ForestModel;
    fn train(&self, matrix: &FeatureMatrix) -> Result<ForestModel, ClassifyError> {
        train_forest(matrix, &self.config)
    }
}

impl Predictor for ForestModel {
    fn predict_row(&self, row: &[f64]) -> usize {
        self.predict(row)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ZeroRuleTrainer;

impl Trainer for ZeroRuleTrainer {
    type Model = ZeroRule;
    fn train(&self, matrix: &FeatureMatrix) -> Result<ZeroRule, ClassifyError> {
        fit_zero_rule(&matrix.class_ids, matrix.classes.len())
    }
}

impl Predictor for ZeroRule {
    fn predict_row(&self, _row: &[f64]) -> usize {
        self.predict()
    }
}

#[derive(Clone, Debug)]
pub struct CvSummary {
    pub folds: Vec<FoldMetrics>,
    pub accuracy: MeanStd,
    pub precision: MeanStd,
    pub recall: MeanStd,
    pub f1: MeanStd,
}

impl CvSummary {
    fn from_folds(folds: Vec<FoldMetrics>) -> CvSummary {
        let col = |f: fn(&FoldMetrics) -> f64| mean_std(&folds.iter().map(f).collect::<Vec<_>>());
        CvSummary {
            accuracy: col(|m| m.accuracy),
            precision: col(|m| m.precision),
            recall: col(|m| m.recall),
            f1: col(|m| m.f1),
            folds,
        }
    }
}

/// Trains on k-1 folds and scores the held-out fold, k times.
pub fn cross_validate<T: Trainer>(
    matrix: &FeatureMatrix,
    k: usize,
    seed: u64,
    trainer: &T,
) -> Result<CvSummary, ClassifyError> {
    let folds = stratified_folds(&matrix.class_ids, matrix.classes.len(), k, seed)?;
    let mut fold_metrics = Vec::with_capacity(k);
    for held_out in &folds {
        let mut in_test = vec![false; matrix.n_rows()];
        for &r in held_out {
            in_test[r] = true;
        }
        let train_rows: Vec<usize> = (0..matrix.n_rows()).filter(|&r| !in_test[r]).collect();
        let model = trainer.train(&matrix.subset_rows(&train_rows))?;
        let mut confusion = ConfusionMatrix::new(matrix.classes.len());
        for &r in held_out {
            confusion.record(matrix.class_ids[r], model.predict_row(matrix.row(r)));
        }
        fold_metrics.push(confusion.metrics());
    }
    Ok(CvSummary::from_folds(fold_metrics))
}
