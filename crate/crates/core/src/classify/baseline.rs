//! Sanity-floor classifiers: always-the-majority and one best column.

use super::ClassifyError;
use crate::features::FeatureMatrix;

/// Predicts the modal training class regardless of input.
#[derive(Clone, Copy, Debug)]
pub struct ZeroRule {
    pub modal_class: usize,
}

pub fn fit_zero_rule(class_ids: &[usize], n_classes: usize) -> Result<ZeroRule, ClassifyError> {
    if class_ids.is_empty() {
        return Err(ClassifyError::EmptyTrainingSet);
    }
    let mut counts = vec![0usize; n_classes];
    for &c in class_ids {
        counts[c] += 1;
    }
    let mut modal = 0;
    for (c, &n) in counts.iter().enumerate() {
        if n > counts[modal] {
            modal = c;
        }
    }
    Ok(ZeroRule { modal_class: modal })
}

impl ZeroRule {
    pub fn predict(&self) -> usize {
        self.modal_class
    }
}

const ONE_RULE_BINS: usize = 10;

/// Ten equal-width bins on a single column, each predicting its majority
/// training class. The column is the one with the lowest training error.
#[derive(Clone, Debug)]
pub struct OneRule {
    pub column: usize,
    pub column_name: String,
    pub train_error: f64,
    min: f64,
    width: f64,
    bin_classes: [usize; ONE_RULE_BINS],
}

impl OneRule {
    fn bin_of(min: f64, width: f64, value: f64) -> usize {
        if width == 0.0 {
            return 0;
        }
        // values outside the training range clamp into the edge bins
        let raw = ((value - min) / width).floor();
        if raw < 0.0 {
            0
        } else {
            (raw as usize).min(ONE_RULE_BINS - 1)
        }
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        self.bin_classes[Self::bin_of(self.min, self.width, row[self.column])]
    }
}

/// Fits a one-column rule per feature and keeps the best by training
/// error; ties break toward the lexicographically first column name.
pub fn fit_one_rule(matrix: &FeatureMatrix) -> Result<OneRule, ClassifyError> {
    if matrix.n_rows() == 0 {
        return Err(ClassifyError::EmptyTrainingSet);
    }
    if matrix.n_cols() == 0 {
        return Err(ClassifyError::NoFeatures);
    }
    let n_classes = matrix.classes.len();
    let modal = fit_zero_rule(&matrix.class_ids, n_classes)?.modal_class;

    let mut best: Option<OneRule> = None;
    for col in 0..matrix.n_cols() {
        let values = matrix.column_values(col);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let width = if max == min { 0.0 } else { (max - min) / ONE_RULE_BINS as f64 };

        let mut bin_counts = vec![[0usize; ONE_RULE_BINS]; n_classes];
        for (v, &class) in values.iter().zip(&matrix.class_ids) {
            bin_counts[class][OneRule::bin_of(min, width, *v)] += 1;
        }
        let mut bin_classes = [0usize; ONE_RULE_BINS];
        for (b, slot) in bin_classes.iter_mut().enumerate() {
            let mut winner = None;
            for c in 0..n_classes {
                let n = bin_counts[c][b];
                if n > 0 && winner.map_or(true, |(_, best_n)| n > best_n) {
                    winner = Some((c, n));
                }
            }
            // an empty bin falls back to the global modal class
            *slot = winner.map_or(modal, |(c, _)| c);
        }

        let wrong = values
            .iter()
            .zip(&matrix.class_ids)
            .filter(|(v, &class)| bin_classes[OneRule::bin_of(min, width, **v)] != class)
            .count();
        let train_error = wrong as f64 / matrix.n_rows() as f64;
        let name = matrix.columns[col].stable_name.clone();
        let better = match &best {
            None => true,
            Some(b) => {
                train_error < b.train_error || (train_error == b.train_error && name < b.column_name)
            }
        };
        if better {
            best = Some(OneRule { column: col, column_name: name, train_error, min, width, bin_classes });
        }
    }
    Ok(best.expect("at least one column"))
}

/// Correct count, total, and percentage for a batch of predictions.
#[derive(Clone, Copy, Debug)]
pub struct BaselineOutcome {
    pub correct: usize,
    pub total: usize,
    pub accuracy_pct: f64,
}

impl BaselineOutcome {
    pub fn from_predictions(predicted: &[usize], truth: &[usize]) -> BaselineOutcome {
        let correct = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
        let total = truth.len();
        let accuracy_pct = if total == 0 { 0.0 } else { 100.0 * correct as f64 / total as f64 };
        BaselineOutcome { correct, total, accuracy_pct }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{extract_matrix, DomainTag, StatOptions};
    use crate::ingest::{parse_frames, windowize};
    use std::io::Cursor;

    #[test]
    fn zero_rule_picks_modal_class_lowest_id_on_tie() {
        assert_eq!(fit_zero_rule(&[0, 1, 1, 2], 3).unwrap().modal_class, 1);
        assert_eq!(fit_zero_rule(&[2, 2, 0, 0], 3).unwrap().modal_class, 0);
        assert!(matches!(fit_zero_rule(&[], 3), Err(ClassifyError::EmptyTrainingSet)));
    }

    fn striped_matrix() -> FeatureMatrix {
        // x separates the classes crisply, y is pure noise around zero
        let mut csv = String::from("recording_id,label,right_palm_position_x,right_palm_position_y\n");
        let noise = [0.3, -0.2, 0.1, -0.4, 0.2, 0.0];
        let mut k = 0;
        for (label, base) in [("HELLO", 0.0), ("GOOD", 100.0), ("BAD", 200.0)] {
            for rec in 0..2 {
                for frame in 0..3 {
                    csv.push_str(&format!(
                        "{label}{rec},{label},{},{}\n",
                        base + frame as f64,
                        noise[k % noise.len()]
                    ));
                    k += 1;
                }
            }
        }
        let stream = parse_frames(Cursor::new(csv)).unwrap();
        let windows = windowize(&stream, 3, 1).unwrap();
        let names: Vec<String> = stream.channels.iter().map(|c| c.stable_name.clone()).collect();
        extract_matrix(&stream, &windows, &names, DomainTag::Statistical, &StatOptions::default()).unwrap()
    }

    #[test]
    fn one_rule_finds_a_separating_column() {
        let matrix = striped_matrix();
        let rule = fit_one_rule(&matrix).unwrap();
        assert_eq!(rule.train_error, 0.0);
        assert!(rule.column_name.starts_with("right_palm_position_x__"));
        for r in 0..matrix.n_rows() {
            assert_eq!(rule.predict(matrix.row(r)), matrix.class_ids[r]);
        }
    }

    #[test]
    fn one_rule_out_of_range_values_clamp() {
        let matrix = striped_matrix();
        let rule = fit_one_rule(&matrix).unwrap();
        let mut low = matrix.row(0).to_vec();
        low[rule.column] = -1e9;
        let mut high = low.clone();
        high[rule.column] = 1e9;
        assert_eq!(rule.predict(&low), 0);
        assert_eq!(rule.predict(&high), 2);
    }

    #[test]
    fn outcome_percentages() {
        let outcome = BaselineOutcome::from_predictions(&[0, 1, 1, 0], &[0, 1, 0, 0]);
        assert_eq!(outcome.correct, 3);
        assert_eq!(outcome.total, 4);
        assert_eq!(outcome.accuracy_pct, 75.0);
    }
}
