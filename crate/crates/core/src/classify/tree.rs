//! A single CART classification tree grown on Gini impurity.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::features::FeatureMatrix;

/// Column-major copy of the training values; tree growth reads one
/// feature at a time, which is hostile to row-major layout.
pub(crate) struct ColumnData {
    pub n_rows: usize,
    pub n_cols: usize,
    pub n_classes: usize,
    values: Vec<f64>,
    pub class_ids: Vec<usize>,
}

impl ColumnData {
    pub fn from_matrix(matrix: &FeatureMatrix) -> Self {
        let (n_rows, n_cols) = (matrix.n_rows(), matrix.n_cols());
        let mut values = Vec::with_capacity(n_rows * n_cols);
        for c in 0..n_cols {
            for r in 0..n_rows {
                values.push(matrix.value(r, c));
            }
        }
        ColumnData {
            n_rows,
            n_cols,
            n_classes: matrix.classes.len(),
            values,
            class_ids: matrix.class_ids.clone(),
        }
    }

    #[inline]
    fn value(&self, row: usize, col: usize) -> f64 {
        self.values[col * self.n_rows + row]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Node {
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { counts: Vec<u32> },
}

#[derive(Clone, Debug)]
pub struct DecisionTree {
    pub(crate) nodes: Vec<Node>,
}

struct Work {
    slot: usize,
    rows: Vec<usize>,
}

/// Draws `m` distinct feature indices with a partial Fisher-Yates pass
/// over `perm`, then undoes the swaps so `perm` stays the identity.
fn sample_features(perm: &mut [usize], m: usize, rng: &mut ChaCha8Rng, out: &mut Vec<usize>) {
    let d = perm.len();
    out.clear();
    let mut swaps = Vec::with_capacity(m);
    for i in 0..m {
        let j = rng.gen_range(i..d);
        perm.swap(i, j);
        swaps.push((i, j));
        out.push(perm[i]);
    }
    for &(i, j) in swaps.iter().rev() {
        perm.swap(i, j);
    }
    out.sort_unstable();
}

impl DecisionTree {
    /// Grows a tree on the given sample rows (duplicates allowed, as a
    /// bootstrap produces). Each node examines ceil(sqrt(d)) features
    /// drawn from `rng`; a node with fewer than 2 samples, a single
    /// class, or no separating candidate becomes a leaf. Nodes are grown
    /// depth-first, left branch first, so the rng consumption order is
    /// fixed by the data alone.
    pub(crate) fn fit(data: &ColumnData, rows: Vec<usize>, rng: &mut ChaCha8Rng) -> DecisionTree {
        assert!(!rows.is_empty(), "cannot fit a tree on zero samples");
        let d = data.n_cols;
        let m = ((d as f64).sqrt().ceil() as usize).clamp(1, d);
        let mut perm: Vec<usize> = (0..d).collect();
        let mut candidates = Vec::with_capacity(m);
        let mut nodes = Vec::new();
        let mut stack = Vec::new();

        nodes.push(Node::Leaf { counts: Vec::new() });
        stack.push(Work { slot: 0, rows });

        let mut sorted: Vec<(f64, usize)> = Vec::new();
        while let Some(work) = stack.pop() {
            let mut counts = vec![0u32; data.n_classes];
            for &r in &work.rows {
                counts[data.class_ids[r]] += 1;
            }
            let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
            if pure || work.rows.len() < 2 {
                nodes[work.slot] = Node::Leaf { counts };
                continue;
            }

            sample_features(&mut perm, m, rng, &mut candidates);
            let mut best: Option<(f64, usize, f64)> = None;
            let mut left_counts = vec![0u32; data.n_classes];
            for &feature in &candidates {
                sorted.clear();
                sorted.extend(work.rows.iter().map(|&r| (data.value(r, feature), data.class_ids[r])));
                sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
                left_counts.iter_mut().for_each(|c| *c = 0);
                let total = sorted.len() as f64;
                let mut n_left = 0.0;
                for i in 0..sorted.len() - 1 {
                    left_counts[sorted[i].1] += 1;
                    n_left += 1.0;
                    if sorted[i].0 == sorted[i + 1].0 {
                        continue;
                    }
                    let threshold = (sorted[i].0 + sorted[i + 1].0) / 2.0;
                    // midpoint of adjacent floats can round onto the upper
                    // value, which would leak it into the left side
                    if threshold >= sorted[i + 1].0 {
                        continue;
                    }
                    let mut left_sq = 0.0;
                    let mut right_sq = 0.0;
                    for (c, &lc) in left_counts.iter().enumerate() {
                        let l = lc as f64;
                        let r = counts[c] as f64 - l;
                        left_sq += l * l;
                        right_sq += r * r;
                    }
                    // maximizing this is minimizing the weighted Gini of
                    // the two children
                    let score = left_sq / n_left + right_sq / (total - n_left);
                    if best.map_or(true, |(s, _, _)| score > s) {
                        best = Some((score, feature, threshold));
                    }
                }
            }

            let Some((_, feature, threshold)) = best else {
                nodes[work.slot] = Node::Leaf { counts };
                continue;
            };
            let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
                work.rows.iter().partition(|&&r| data.value(r, feature) <= threshold);

            let left_slot = nodes.len();
            nodes.push(Node::Leaf { counts: Vec::new() });
            let right_slot = nodes.len();
            nodes.push(Node::Leaf { counts: Vec::new() });
            nodes[work.slot] = Node::Split { feature, threshold, left: left_slot, right: right_slot };
            stack.push(Work { slot: right_slot, rows: right_rows });
            stack.push(Work { slot: left_slot, rows: left_rows });
        }
        DecisionTree { nodes }
    }

    /// Majority class of the leaf this row lands in; ties go to the
    /// lowest class id.
    pub fn predict(&self, row: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Split { feature, threshold, left, right } => {
                    at = if row[*feature] <= *threshold { *left } else { *right };
                }
                Node::Leaf { counts } => {
                    let mut best = 0;
                    for (c, &n) in counts.iter().enumerate() {
                        if n > counts[best] {
                            best = c;
                        }
                    }
                    return best;
                }
            }
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }
}
