//! Early-fusion sweep: for each (n_stat, n_temporal) pair, fuse the
//! top-ranked columns of both domains and cross-validate a forest.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use super::ExperimentError;
use crate::classify::{cross_validate, CvSummary, ForestConfig, ForestTrainer};
use crate::features::FeatureMatrix;
use crate::select::Ranked;
use crate::text::fmt_f64;

/// Fold count, forest size, and the seed shared by fold shuffling and
/// tree growth.
#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub folds: usize,
    pub estimators: usize,
    pub seed: u64,
}

/// Takes the `n` best-ranked columns of a matrix, in rank order.
fn top_columns(matrix: &FeatureMatrix, ranking: &[Ranked], n: usize, domain: &'static str) -> Result<FeatureMatrix, ExperimentError> {
    if n > ranking.len() {
        return Err(ExperimentError::RankBudget { requested: n, available: ranking.len(), domain });
    }
    let indices: Vec<usize> = ranking[..n]
        .iter()
        .map(|r| {
            matrix
                .column_index(&r.stable_name)
                .ok_or_else(|| ExperimentError::MissingColumn { name: r.stable_name.clone() })
        })
        .collect::<Result<_, _>>()?;
    Ok(matrix.select_columns(&indices)?)
}

/// Fuses the top `n_stat` statistical and top `n_temporal` spatio-temporal
/// columns into one matrix. Rows must agree on window identity.
pub fn early_fuse(
    stat: &FeatureMatrix,
    stat_ranking: &[Ranked],
    n_stat: usize,
    temporal: &FeatureMatrix,
    temporal_ranking: &[Ranked],
    n_temporal: usize,
) -> Result<FeatureMatrix, ExperimentError> {
    match (n_stat, n_temporal) {
        (0, 0) => Err(ExperimentError::EmptyFusion),
        (n, 0) => top_columns(stat, stat_ranking, n, "statistical"),
        (0, n) => top_columns(temporal, temporal_ranking, n, "spatio_temporal"),
        (ns, nt) => {
            let left = top_columns(stat, stat_ranking, ns, "statistical")?;
            let right = top_columns(temporal, temporal_ranking, nt, "spatio_temporal")?;
            Ok(FeatureMatrix::hstack(&left, &right)?)
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub n_stat: usize,
    pub n_temporal: usize,
    pub summary: CvSummary,
}

#[derive(Clone, Debug)]
pub struct SweepFailure {
    pub n_stat: usize,
    pub n_temporal: usize,
    pub error: String,
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub outcomes: Vec<SweepOutcome>,
    pub failures: Vec<SweepFailure>,
}

/// Runs every grid pair. A failing pair is recorded and skipped, so one
/// bad configuration cannot void the rest of the sweep. Outcomes keep
/// grid order regardless of scheduling.
pub fn run_sweep(
    stat: &FeatureMatrix,
    stat_ranking: &[Ranked],
    temporal: &FeatureMatrix,
    temporal_ranking: &[Ranked],
    grid: &[(usize, usize)],
    config: &SweepConfig,
) -> SweepReport {
    let results: Vec<Result<SweepOutcome, SweepFailure>> = grid
        .par_iter()
        .map(|&(n_stat, n_temporal)| {
            let run = || -> Result<CvSummary, ExperimentError> {
                let fused = early_fuse(stat, stat_ranking, n_stat, temporal, temporal_ranking, n_temporal)?;
                let trainer = ForestTrainer {
                    config: ForestConfig { n_estimators: config.estimators, seed: config.seed },
                };
                Ok(cross_validate(&fused, config.folds, config.seed, &trainer)?)
            };
            match run() {
                Ok(summary) => Ok(SweepOutcome { n_stat, n_temporal, summary }),
                Err(e) => Err(SweepFailure { n_stat, n_temporal, error: e.to_string() }),
            }
        })
        .collect();

    let mut report = SweepReport::default();
    for r in results {
        match r {
            Ok(o) => report.outcomes.push(o),
            Err(f) => report.failures.push(f),
        }
    }
    report
}

impl SweepReport {
    /// Outcomes sorted for the leaderboard: accuracy descending, then
    /// fewer statistical columns, then fewer temporal columns.
    pub fn sorted_by_accuracy(&self) -> Vec<&SweepOutcome> {
        let mut sorted: Vec<&SweepOutcome> = self.outcomes.iter().collect();
        sorted.sort_by(|a, b| {
            b.summary
                .accuracy
                .mean
                .total_cmp(&a.summary.accuracy.mean)
                .then_with(|| a.n_stat.cmp(&b.n_stat))
                .then_with(|| a.n_temporal.cmp(&b.n_temporal))
        });
        sorted
    }

    /// Best outcome among those matching a predicate on (n_stat, n_temporal).
    pub fn best_where(&self, pred: impl Fn(usize, usize) -> bool) -> Option<&SweepOutcome> {
        self.sorted_by_accuracy().into_iter().find(|o| pred(o.n_stat, o.n_temporal))
    }
}

fn metric_row(out: &mut impl Write, o: &SweepOutcome) -> std::io::Result<()> {
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{}",
        o.n_stat,
        o.n_temporal,
        fmt_f64(o.summary.accuracy.mean),
        fmt_f64(o.summary.accuracy.std),
        fmt_f64(o.summary.precision.mean),
        fmt_f64(o.summary.precision.std),
        fmt_f64(o.summary.recall.mean),
        fmt_f64(o.summary.recall.std),
        fmt_f64(o.summary.f1.mean),
        fmt_f64(o.summary.f1.std),
    )
}

const METRIC_HEADER: &str = "n_stat,n_temporal,accuracy_mean,accuracy_std,precision_mean,precision_std,recall_mean,recall_std,f1_mean,f1_std";

/// Writes sweep_results.csv, heatmap.csv, and top10.csv into `dir`, plus
/// sweep_failures.csv when any configuration failed.
pub fn write_sweep_outputs(dir: &Path, report: &SweepReport) -> Result<(), ExperimentError> {
    let mut results = BufWriter::new(File::create(dir.join("sweep_results.csv"))?);
    writeln!(results, "{METRIC_HEADER}")?;
    for o in &report.outcomes {
        metric_row(&mut results, o)?;
    }
    results.flush()?;

    let mut heatmap = BufWriter::new(File::create(dir.join("heatmap.csv"))?);
    writeln!(heatmap, "n_stat,n_temporal,accuracy_mean")?;
    for o in &report.outcomes {
        writeln!(heatmap, "{},{},{}", o.n_stat, o.n_temporal, fmt_f64(o.summary.accuracy.mean))?;
    }
    heatmap.flush()?;

    let mut top = BufWriter::new(File::create(dir.join("top10.csv"))?);
    writeln!(top, "{METRIC_HEADER}")?;
    for o in report.sorted_by_accuracy().into_iter().take(10) {
        metric_row(&mut top, o)?;
    }
    top.flush()?;

    if !report.failures.is_empty() {
        let mut w = csv::Writer::from_path(dir.join("sweep_failures.csv"))?;
        w.write_record(["n_stat", "n_temporal", "error"])?;
        for f in &report.failures {
            w.write_record([f.n_stat.to_string(), f.n_temporal.to_string(), f.error.clone()])?;
        }
        w.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{generate_synth, SynthConfig, SynthProfile};
    use crate::features::{extract_matrix, DomainTag, StatOptions};
    use crate::ingest::{derive_angle_channels, windowize};
    use crate::select::{anova_f, rank_and_filter, Scored};

    fn matrices() -> (FeatureMatrix, Vec<Ranked>, FeatureMatrix, Vec<Ranked>) {
        let config = SynthConfig {
            classes: 3,
            recordings_per_class: 12,
            frames_per_recording: 3,
            channels: 8,
            informative_fraction: 1.0,
            noise: 0.02,
            profile: SynthProfile::Standard,
            seed: 5,
        };
        let (stream, _) = generate_synth(&config).unwrap();
        let stream = derive_angle_channels(stream).unwrap();
        let windows = windowize(&stream, 3, 1).unwrap();
        let names: Vec<String> = stream.channels.iter().map(|c| c.stable_name.clone()).collect();
        let opts = StatOptions::default();
        let stat = extract_matrix(&stream, &windows, &names, DomainTag::Statistical, &opts).unwrap();
        let temporal = extract_matrix(&stream, &windows, &names, DomainTag::SpatioTemporal, &opts).unwrap();
        let rank = |m: &FeatureMatrix| {
            let scores: Vec<Scored> = (0..m.n_cols())
                .map(|c| {
                    let r = anova_f(&m.column_values(c), &m.class_ids, m.classes.len()).unwrap();
                    Scored { stable_name: m.columns[c].stable_name.clone(), f: r.f, p: r.p }
                })
                .collect();
            rank_and_filter(&scores, 0.05).unwrap()
        };
        let stat_rank = rank(&stat);
        let temporal_rank = rank(&temporal);
        (stat, stat_rank, temporal, temporal_rank)
    }

    #[test]
    fn fusion_takes_columns_in_rank_order() {
        let (stat, stat_rank, temporal, temporal_rank) = matrices();
        let fused = early_fuse(&stat, &stat_rank, 3, &temporal, &temporal_rank, 2).unwrap();
        assert_eq!(fused.n_cols(), 5);
        assert_eq!(fused.columns[0].stable_name, stat_rank[0].stable_name);
        assert_eq!(fused.columns[2].stable_name, stat_rank[2].stable_name);
        assert_eq!(fused.columns[3].stable_name, temporal_rank[0].stable_name);
        assert_eq!(fused.n_rows(), stat.n_rows());
    }

    #[test]
    fn fusion_bounds_are_checked() {
        let (stat, stat_rank, temporal, temporal_rank) = matrices();
        assert!(matches!(
            early_fuse(&stat, &stat_rank, stat_rank.len() + 1, &temporal, &temporal_rank, 0),
            Err(ExperimentError::RankBudget { domain: "statistical", .. })
        ));
        assert!(matches!(
            early_fuse(&stat, &stat_rank, 0, &temporal, &temporal_rank, 0),
            Err(ExperimentError::EmptyFusion)
        ));
    }

    #[test]
    fn sweep_reports_every_grid_point_in_order() {
        let (stat, stat_rank, temporal, temporal_rank) = matrices();
        let grid = vec![(2, 0), (0, 2), (2, 2)];
        let config = SweepConfig { folds: 3, estimators: 10, seed: 1 };
        let report = run_sweep(&stat, &stat_rank, &temporal, &temporal_rank, &grid, &config);
        assert!(report.failures.is_empty());
        let pairs: Vec<(usize, usize)> = report.outcomes.iter().map(|o| (o.n_stat, o.n_temporal)).collect();
        assert_eq!(pairs, grid);
        for o in &report.outcomes {
            assert!(o.summary.accuracy.mean > 50.0, "synthetic data should be learnable");
        }
    }

    #[test]
    fn failures_are_recorded_not_fatal() {
        let (stat, stat_rank, temporal, temporal_rank) = matrices();
        let grid = vec![(2, 0), (100_000, 0)];
        let config = SweepConfig { folds: 3, estimators: 5, seed: 1 };
        let report = run_sweep(&stat, &stat_rank, &temporal, &temporal_rank, &grid, &config);
        assert_eq!(report.outcomes.len(), 1);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].n_stat, 100_000);
    }

    #[test]
    fn outputs_land_on_disk() {
        let (stat, stat_rank, temporal, temporal_rank) = matrices();
        let grid = vec![(2, 0), (0, 2)];
        let config = SweepConfig { folds: 3, estimators: 5, seed: 1 };
        let report = run_sweep(&stat, &stat_rank, &temporal, &temporal_rank, &grid, &config);
        let dir = tempfile::tempdir().unwrap();
        write_sweep_outputs(dir.path(), &report).unwrap();
        for file in ["sweep_results.csv", "heatmap.csv", "top10.csv"] {
            let text = std::fs::read_to_string(dir.path().join(file)).unwrap();
            assert_eq!(text.lines().count(), 3, "{file}");
        }
        assert!(!dir.path().join("sweep_failures.csv").exists());
    }

    #[test]
    fn leaderboard_sorting_breaks_ties_toward_fewer_columns() {
        let (stat, stat_rank, temporal, temporal_rank) = matrices();
        let grid = vec![(2, 2), (2, 0)];
        let config = SweepConfig { folds: 3, estimators: 5, seed: 1 };
        let report = run_sweep(&stat, &stat_rank, &temporal, &temporal_rank, &grid, &config);
        let sorted = report.sorted_by_accuracy();
        for pair in sorted.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            assert!(
                a.summary.accuracy.mean > b.summary.accuracy.mean
                    || (a.summary.accuracy.mean == b.summary.accuracy.mean
                        && (a.n_stat, a.n_temporal) <= (b.n_stat, b.n_temporal))
            );
        }
        let best_stat_only = report.best_where(|_, nt| nt == 0).unwrap();
        assert_eq!(best_stat_only.n_temporal, 0);
    }
}
