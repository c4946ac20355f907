//! Confusion matrix and the macro-averaged scores derived from it.

/// Square count matrix, truth-major: `count(t, p)` is the number of
/// samples of true class `t` predicted as `p`.
#[derive(Clone, Debug)]
pub struct ConfusionMatrix {
    n_classes: usize,
    counts: Vec<usize>,
}

impl ConfusionMatrix {
    pub fn new(n_classes: usize) -> Self {
        ConfusionMatrix { n_classes, counts: vec![0; n_classes * n_classes] }
    }

    pub fn record(&mut self, truth: usize, predicted: usize) {
        self.counts[truth * self.n_classes + predicted] += 1;
    }

    pub fn count(&self, truth: usize, predicted: usize) -> usize {
        self.counts[truth * self.n_classes + predicted]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn correct(&self) -> usize {
        (0..self.n_classes).map(|c| self.count(c, c)).sum()
    }

    /// Percent correct over all recorded samples.
    pub fn accuracy_pct(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            100.0 * self.correct() as f64 / total as f64
        }
    }

    fn per_class(&self, c: usize) -> (usize, usize, usize) {
        let tp = self.count(c, c);
        let predicted: usize = (0..self.n_classes).map(|t| self.count(t, c)).sum();
        let actual: usize = (0..self.n_classes).map(|p| self.count(c, p)).sum();
        (tp, predicted, actual)
    }

    /// Macro precision in [0, 1]; classes never predicted contribute 0.
    pub fn macro_precision(&self) -> f64 {
        let sum: f64 = (0..self.n_classes)
            .map(|c| {
                let (tp, predicted, _) = self.per_class(c);
                if predicted == 0 {
                    0.0
                } else {
                    tp as f64 / predicted as f64
                }
            })
            .sum();
        sum / self.n_classes as f64
    }

    /// Macro recall in [0, 1]; absent classes contribute 0.
    pub fn macro_recall(&self) -> f64 {
        let sum: f64 = (0..self.n_classes)
            .map(|c| {
                let (tp, _, actual) = self.per_class(c);
                if actual == 0 {
                    0.0
                } else {
                    tp as f64 / actual as f64
                }
            })
            .sum();
        sum / self.n_classes as f64
    }

    /// Mean of per-class F1 scores in [0, 1].
    pub fn macro_f1(&self) -> f64 {
        let sum: f64 = (0..self.n_classes)
            .map(|c| {
                let (tp, predicted, actual) = self.per_class(c);
                let p = if predicted == 0 { 0.0 } else { tp as f64 / predicted as f64 };
                let r = if actual == 0 { 0.0 } else { tp as f64 / actual as f64 };
                if p + r == 0.0 {
                    0.0
                } else {
                    2.0 * p * r / (p + r)
                }
            })
            .sum();
        sum / self.n_classes as f64
    }

    pub fn metrics(&self) -> FoldMetrics {
        FoldMetrics {
            accuracy: self.accuracy_pct(),
            precision: self.macro_precision(),
            recall: self.macro_recall(),
            f1: self.macro_f1(),
        }
    }
}

/// Scores for one evaluation fold. Accuracy is a percentage; the macro
/// scores stay in [0, 1].
#[derive(Clone, Copy, Debug)]
pub struct FoldMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> MeanStd {
    if values.is_empty() {
        return MeanStd { mean: 0.0, std: 0.0 };
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    MeanStd { mean, std: var.sqrt() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn perfect_predictions_score_one() {
        let mut m = ConfusionMatrix::new(3);
        for c in 0..3 {
            m.record(c, c);
            m.record(c, c);
        }
        assert_eq!(m.accuracy_pct(), 100.0);
        assert_eq!(m.macro_precision(), 1.0);
        assert_eq!(m.macro_recall(), 1.0);
        assert_eq!(m.macro_f1(), 1.0);
        assert_eq!(m.correct(), 6);
        assert_eq!(m.total(), 6);
    }

    #[test]
    fn known_two_class_matrix() {
        let mut m = ConfusionMatrix::new(2);
        // class 0: 3 right, 1 predicted as 1; class 1: 2 right, 2 as 0
        for _ in 0..3 {
            m.record(0, 0);
        }
        m.record(0, 1);
        for _ in 0..2 {
            m.record(1, 1);
        }
        for _ in 0..2 {
            m.record(1, 0);
        }
        assert_relative_eq!(m.accuracy_pct(), 62.5);
        let p0 = 3.0 / 5.0;
        let p1 = 2.0 / 3.0;
        assert_relative_eq!(m.macro_precision(), (p0 + p1) / 2.0, max_relative = 1e-12);
        let r0 = 3.0 / 4.0;
        let r1 = 2.0 / 4.0;
        assert_relative_eq!(m.macro_recall(), (r0 + r1) / 2.0, max_relative = 1e-12);
        let f0 = 2.0 * p0 * r0 / (p0 + r0);
        let f1 = 2.0 * p1 * r1 / (p1 + r1);
        assert_relative_eq!(m.macro_f1(), (f0 + f1) / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn never_predicted_class_contributes_zero() {
        let mut m = ConfusionMatrix::new(2);
        m.record(0, 0);
        m.record(1, 0);
        assert_relative_eq!(m.macro_precision(), 0.25);
        assert_relative_eq!(m.macro_recall(), 0.5);
        assert_relative_eq!(m.macro_f1(), 1.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn mean_std_is_population() {
        let s = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_relative_eq!(s.mean, 5.0);
        assert_relative_eq!(s.std, 2.0);
        let single = mean_std(&[3.0]);
        assert_eq!(single.std, 0.0);
    }
}
