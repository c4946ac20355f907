//! Bagged ensemble of CART trees with majority voting.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;

use super::tree::{ColumnData, DecisionTree, Node};
use super::ClassifyError;
use crate::features::FeatureMatrix;
use crate::seed::{substream, Domain};
use crate::text::{fmt_f64, parse_f64};

#[derive(Clone, Copy, Debug)]
pub struct ForestConfig {
    pub n_estimators: usize,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig { n_estimators: 100, seed: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct ForestModel {
    pub classes: Vec<String>,
    pub feature_names: Vec<String>,
    pub seed: u64,
    trees: Vec<DecisionTree>,
}

/// Trains one tree per estimator slot. Tree `i` draws its bootstrap and
/// every node's feature subset from its own seed substream, so the model
/// does not depend on thread scheduling.
pub fn train_forest(matrix: &FeatureMatrix, config: &ForestConfig) -> Result<ForestModel, ClassifyError> {
    if matrix.n_rows() == 0 {
        return Err(ClassifyError::EmptyTrainingSet);
    }
    if matrix.n_cols() == 0 {
        return Err(ClassifyError::NoFeatures);
    }
    if config.n_estimators == 0 {
        return Err(ClassifyError::NoEstimators);
    }
    let data = ColumnData::from_matrix(matrix);
    let n = data.n_rows;
    let trees: Vec<DecisionTree> = (0..config.n_estimators)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(config.seed, Domain::ForestTree, t as u64);
            let rows: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            DecisionTree::fit(&data, rows, &mut rng)
        })
        .collect();
    Ok(ForestModel {
        classes: matrix.classes.clone(),
        feature_names: matrix.columns.iter().map(|c| c.stable_name.clone()).collect(),
        seed: config.seed,
        trees,
    })
}

impl ForestModel {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Majority vote over all trees; ties go to the lowest class id.
    pub fn predict(&self, row: &[f64]) -> usize {
        let mut votes = vec![0u32; self.classes.len()];
        for tree in &self.trees {
            votes[tree.predict(row)] += 1;
        }
        let mut best = 0;
        for (c, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = c;
            }
        }
        best
    }

    /// Predictions for every row of a matrix whose columns match the
    /// training columns by name and order.
    pub fn predict_matrix(&self, matrix: &FeatureMatrix) -> Result<Vec<usize>, ClassifyError> {
        if matrix.n_cols() != self.feature_names.len() {
            return Err(ClassifyError::FeatureMismatch {
                expected: self.feature_names.len(),
                found: matrix.n_cols(),
            });
        }
        for (col, name) in matrix.columns.iter().zip(&self.feature_names) {
            if col.stable_name != *name {
                return Err(ClassifyError::FeatureNameMismatch {
                    expected: name.clone(),
                    found: col.stable_name.clone(),
                });
            }
        }
        Ok((0..matrix.n_rows()).map(|r| self.predict(matrix.row(r))).collect())
    }

    pub fn save(&self, path: &Path) -> Result<(), ClassifyError> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "forest-model v1")?;
        writeln!(w, "seed {}", self.seed)?;
        writeln!(w, "classes {}", self.classes.len())?;
        for c in &self.classes {
            writeln!(w, "{c}")?;
        }
        writeln!(w, "features {}", self.feature_names.len())?;
        for f in &self.feature_names {
            writeln!(w, "{f}")?;
        }
        writeln!(w, "trees {}", self.trees.len())?;
        for tree in &self.trees {
            writeln!(w, "tree {}", tree.nodes.len())?;
            for node in &tree.nodes {
                match node {
                    Node::Split { feature, threshold, left, right } => {
                        writeln!(w, "split {feature} {} {left} {right}", fmt_f64(*threshold))?;
                    }
                    Node::Leaf { counts } => {
                        write!(w, "leaf")?;
                        for c in counts {
                            write!(w, " {c}")?;
                        }
                        writeln!(w)?;
                    }
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<ForestModel, ClassifyError> {
        let reader = BufReader::new(File::open(path)?);
        let mut lines = reader.lines().enumerate();
        let mut next = || -> Result<(usize, String), ClassifyError> {
            match lines.next() {
                Some((i, Ok(line))) => Ok((i + 1, line)),
                Some((_, Err(e))) => Err(ClassifyError::Io(e)),
                None => Err(ClassifyError::ModelFormat { line: 0, reason: "unexpected end of file".into() }),
            }
        };
        let bad = |line: usize, reason: &str| ClassifyError::ModelFormat { line, reason: reason.into() };

        let (line, header) = next()?;
        if header != "forest-model v1" {
            return Err(bad(line, "not a v1 forest model file"));
        }
        let (line, seed_line) = next()?;
        let seed = seed_line
            .strip_prefix("seed ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(line, "expected seed"))?;
        let (line, classes_line) = next()?;
        let n_classes: usize = classes_line
            .strip_prefix("classes ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(line, "expected class count"))?;
        let mut classes = Vec::with_capacity(n_classes);
        for _ in 0..n_classes {
            classes.push(next()?.1);
        }
        let (line, features_line) = next()?;
        let n_features: usize = features_line
            .strip_prefix("features ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(line, "expected feature count"))?;
        let mut feature_names = Vec::with_capacity(n_features);
        for _ in 0..n_features {
            feature_names.push(next()?.1);
        }
        let (line, trees_line) = next()?;
        let n_trees: usize = trees_line
            .strip_prefix("trees ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(line, "expected tree count"))?;
        let mut trees = Vec::with_capacity(n_trees);
        for _ in 0..n_trees {
            let (line, tree_line) = next()?;
            let n_nodes: usize = tree_line
                .strip_prefix("tree ")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(line, "expected tree header"))?;
            let mut nodes = Vec::with_capacity(n_nodes);
            for _ in 0..n_nodes {
                let (line, node_line) = next()?;
                let mut parts = node_line.split(' ');
                match parts.next() {
                    Some("split") => {
                        let feature = parts
                            .next()
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| bad(line, "split missing feature"))?;
                        let threshold = parts
                            .next()
                            .and_then(parse_f64)
                            .ok_or_else(|| bad(line, "split missing threshold"))?;
                        let left = parts
                            .next()
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| bad(line, "split missing left child"))?;
                        let right = parts
                            .next()
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| bad(line, "split missing right child"))?;
                        if left >= n_nodes || right >= n_nodes {
                            return Err(bad(line, "child index out of range"));
                        }
                        nodes.push(Node::Split { feature, threshold, left, right });
                    }
                    Some("leaf") => {
                        let counts: Vec<u32> = parts
                            .map(|s| s.parse().map_err(|_| bad(line, "bad leaf count")))
                            .collect::<Result<_, _>>()?;
                        if counts.len() != n_classes && !counts.is_empty() {
                            return Err(bad(line, "leaf count arity mismatch"));
                        }
                        nodes.push(Node::Leaf { counts });
                    }
                    _ => return Err(bad(line, "expected split or leaf")),
                }
            }
            trees.push(DecisionTree { nodes });
        }
        Ok(ForestModel { classes, feature_names, seed, trees })
    }
}
