//! Batch pipeline stages: synth → extract → rank → sweep → report.
//!
//! Every stage reads its inputs from `output_dir` (or the configured
//! input file), writes its artifacts back there, and returns a small
//! summary for logging. Stages are idempotent and deterministic for a
//! fixed config, so re-running any stage reproduces its files byte for
//! byte.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::classify::{
    fit_one_rule, fit_zero_rule, BaselineOutcome, ClassifyError, CvSummary, MeanStd, OneRule,
};
use crate::experiment::{
    enumerate_grid, generate_synth, run_sweep, write_sweep_outputs, ExperimentError, GridKind,
    SweepConfig, SweepOutcome, SynthConfig, SynthProfile, STEP,
};
use crate::features::{
    extract_matrix, write_manifest, DomainTag, FeatureError, FeatureMatrix, StatOptions,
};
use crate::ingest::{derive_angle_channels, parse_frames, windowize, write_frames, IngestError};
use crate::select::{
    anova_f, mean_top_n, rank_and_filter, select_raw_channels, Ranked, Scored, SelectError,
};
use crate::text::{fmt_f64, parse_f64};

pub const DATASET_FILE: &str = "dataset.csv";
pub const STAT_FEATURES_FILE: &str = "features_statistical.csv";
pub const TEMPORAL_FEATURES_FILE: &str = "features_spatio_temporal.csv";
pub const MANIFEST_FILE: &str = "feature_manifest.csv";
pub const RAW_RANKING_FILE: &str = "ranked_channels_raw.csv";
pub const STAT_RANKING_FILE: &str = "ranked_features_stat.csv";
pub const TEMPORAL_RANKING_FILE: &str = "ranked_features_temporal.csv";
pub const SWEEP_RESULTS_FILE: &str = "sweep_results.csv";
pub const HEATMAP_FILE: &str = "heatmap.csv";
pub const TOP10_FILE: &str = "top10.csv";
pub const SWEEP_FAILURES_FILE: &str = "sweep_failures.csv";
pub const BASELINES_FILE: &str = "baselines.csv";
pub const BEST_OF_EACH_FILE: &str = "best_of_each.csv";
pub const MEAN_F_FILE: &str = "mean_f_top_n.csv";
pub const REPORT_FILE: &str = "report.txt";

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("bad configuration: {reason}")]
    Config { reason: String },
    #[error("missing {role} file {path:?}; run the producing stage first")]
    MissingFile { role: &'static str, path: PathBuf },
    #[error("malformed {path:?} line {line}: {reason}")]
    Artifact { path: PathBuf, line: usize, reason: String },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Select(#[from] SelectError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Knobs shared by all stages. Defaults mirror the reference setup:
/// 3-frame windows, top-50 raw channels, 250-column budget, 10 folds,
/// 100 trees, seed 1.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Frame CSV to ingest; defaults to `<output_dir>/dataset.csv`.
    pub input: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub window_len: usize,
    pub stride: usize,
    pub top_raw_channels: usize,
    pub alpha: f64,
    pub top_features: usize,
    pub folds: usize,
    pub estimators: usize,
    pub seed: u64,
    pub grid: GridKind,
    pub classes: usize,
    pub recordings_per_class: usize,
    pub frames_per_recording: usize,
    pub channels: usize,
    pub informative_fraction: f64,
    pub noise: f64,
    pub profile: SynthProfile,
}

impl Default for RunConfig {
    fn default() -> Self {
        let synth = SynthConfig::default();
        RunConfig {
            input: None,
            output_dir: PathBuf::from("."),
            window_len: 3,
            stride: 1,
            top_raw_channels: 50,
            alpha: 0.05,
            top_features: 250,
            folds: 10,
            estimators: 100,
            seed: 1,
            grid: GridKind::FullGrid,
            classes: synth.classes,
            recordings_per_class: synth.recordings_per_class,
            frames_per_recording: synth.frames_per_recording,
            channels: synth.channels,
            informative_fraction: synth.informative_fraction,
            noise: synth.noise,
            profile: synth.profile,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |reason: &str| Err(PipelineError::Config { reason: reason.to_string() });
        if self.window_len < 2 {
            return bad("window_len must be at least 2");
        }
        if self.stride == 0 {
            return bad("stride must be positive");
        }
        if self.top_raw_channels == 0 {
            return bad("top_raw_channels must be positive");
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad("alpha must lie in (0, 1]");
        }
        if self.top_features < STEP {
            return bad("top_features must cover at least one grid step");
        }
        if self.folds < 2 {
            return bad("folds must be at least 2");
        }
        if self.estimators == 0 {
            return bad("estimators must be positive");
        }
        Ok(())
    }

    pub fn synth_config(&self) -> SynthConfig {
        SynthConfig {
            classes: self.classes,
            recordings_per_class: self.recordings_per_class,
            frames_per_recording: self.frames_per_recording,
            channels: self.channels,
            informative_fraction: self.informative_fraction,
            noise: self.noise,
            profile: self.profile,
            seed: self.seed,
        }
    }

    fn artifact(&self, name: &str) -> PathBuf {
        self.output_dir.join(name)
    }

    fn dataset_path(&self) -> PathBuf {
        self.input.clone().unwrap_or_else(|| self.artifact(DATASET_FILE))
    }
}

fn open_artifact(role: &'static str, path: &Path) -> Result<BufReader<File>, PipelineError> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(PipelineError::MissingFile { role, path: path.to_path_buf() })
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Clone, Debug)]
pub struct SynthSummary {
    pub frames: usize,
    pub channels: usize,
    pub informative: usize,
    pub uninformative: usize,
    pub path: PathBuf,
}

/// Generates the synthetic dataset and writes it as a frame CSV.
pub fn run_synth(config: &RunConfig) -> Result<SynthSummary, PipelineError> {
    config.validate()?;
    std::fs::create_dir_all(&config.output_dir)?;
    let (stream, info) = generate_synth(&config.synth_config())?;
    let path = config.artifact(DATASET_FILE);
    let mut out = BufWriter::new(File::create(&path)?);
    write_frames(&stream, &mut out)?;
    out.flush()?;
    Ok(SynthSummary {
        frames: stream.frames.len(),
        channels: stream.channels.len(),
        informative: info.informative.len(),
        uninformative: info.uninformative.len(),
        path,
    })
}

#[derive(Clone, Debug)]
pub struct ExtractSummary {
    pub raw_channels: usize,
    pub selected_channels: usize,
    pub shortfall: bool,
    pub windows: usize,
    pub stat_columns: usize,
    pub temporal_columns: usize,
}

/// Ranks raw channels, keeps the best, and extracts both feature
/// matrices over sliding windows.
pub fn run_extract(config: &RunConfig) -> Result<ExtractSummary, PipelineError> {
    config.validate()?;
    std::fs::create_dir_all(&config.output_dir)?;
    let dataset = config.dataset_path();
    let stream = parse_frames(open_artifact("dataset", &dataset)?)?;
    let stream = derive_angle_channels(stream)?;

    let selection = select_raw_channels(&stream, config.top_raw_channels, config.alpha)?;
    {
        let mut out = BufWriter::new(File::create(config.artifact(RAW_RANKING_FILE))?);
        writeln!(out, "rank,stable_name,f_value,p_value,selected")?;
        for s in &selection.ranking {
            writeln!(
                out,
                "{},{},{},{},{}",
                s.rank,
                s.stable_name,
                fmt_f64(s.f),
                fmt_f64(s.p),
                s.selected
            )?;
        }
        out.flush()?;
    }

    let windows = windowize(&stream, config.window_len, config.stride)?;
    let opts = StatOptions::default();
    let stat = extract_matrix(&stream, &windows, &selection.selected, DomainTag::Statistical, &opts)?;
    let temporal =
        extract_matrix(&stream, &windows, &selection.selected, DomainTag::SpatioTemporal, &opts)?;

    stat.write_csv(&config.artifact(STAT_FEATURES_FILE))?;
    temporal.write_csv(&config.artifact(TEMPORAL_FEATURES_FILE))?;
    let mut manifest_columns = stat.columns.clone();
    manifest_columns.extend(temporal.columns.iter().cloned());
    write_manifest(&config.artifact(MANIFEST_FILE), &manifest_columns)?;

    Ok(ExtractSummary {
        raw_channels: stream.channels.len(),
        selected_channels: selection.selected.len(),
        shortfall: selection.shortfall,
        windows: windows.len(),
        stat_columns: stat.n_cols(),
        temporal_columns: temporal.n_cols(),
    })
}

#[derive(Clone, Debug)]
pub struct RankSummary {
    pub stat_survivors: usize,
    pub temporal_survivors: usize,
}

fn rank_matrix(matrix: &FeatureMatrix, alpha: f64) -> Result<Vec<Ranked>, PipelineError> {
    let scores: Vec<Scored> = (0..matrix.n_cols())
        .map(|c| {
            let r = anova_f(&matrix.column_values(c), &matrix.class_ids, matrix.classes.len())?;
            Ok(Scored { stable_name: matrix.columns[c].stable_name.clone(), f: r.f, p: r.p })
        })
        .collect::<Result<_, SelectError>>()?;
    Ok(rank_and_filter(&scores, alpha)?)
}

fn write_ranking(path: &Path, ranking: &[Ranked]) -> Result<(), PipelineError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "rank,stable_name,f_value,p_value")?;
    for r in ranking {
        writeln!(out, "{},{},{},{}", r.rank, r.stable_name, fmt_f64(r.f), fmt_f64(r.p))?;
    }
    out.flush()?;
    Ok(())
}

fn read_ranking(role: &'static str, path: &Path) -> Result<Vec<Ranked>, PipelineError> {
    let mut text = String::new();
    open_artifact(role, path)?.read_to_string(&mut text)?;
    let malformed = |line: usize, reason: &str| PipelineError::Artifact {
        path: path.to_path_buf(),
        line,
        reason: reason.to_string(),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == "rank,stable_name,f_value,p_value" => {}
        _ => return Err(malformed(1, "expected ranking header")),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(malformed(i + 1, "expected 4 fields"));
        }
        let rank: usize = fields[0].parse().map_err(|_| malformed(i + 1, "bad rank"))?;
        let f = parse_f64(fields[2]).ok_or_else(|| malformed(i + 1, "bad f_value"))?;
        let p = parse_f64(fields[3]).ok_or_else(|| malformed(i + 1, "bad p_value"))?;
        out.push(Ranked { rank, stable_name: fields[1].to_string(), f, p });
    }
    Ok(out)
}

/// Scores every extracted feature column with the one-way F-test and
/// writes the surviving columns, best first, per domain.
pub fn run_rank(config: &RunConfig) -> Result<RankSummary, PipelineError> {
    config.validate()?;
    let stat = FeatureMatrix::read_csv(
        &must_exist("statistical features", &config.artifact(STAT_FEATURES_FILE))?,
        DomainTag::Statistical,
    )?;
    let temporal = FeatureMatrix::read_csv(
        &must_exist("spatio-temporal features", &config.artifact(TEMPORAL_FEATURES_FILE))?,
        DomainTag::SpatioTemporal,
    )?;
    let stat_ranking = rank_matrix(&stat, config.alpha)?;
    let temporal_ranking = rank_matrix(&temporal, config.alpha)?;
    write_ranking(&config.artifact(STAT_RANKING_FILE), &stat_ranking)?;
    write_ranking(&config.artifact(TEMPORAL_RANKING_FILE), &temporal_ranking)?;
    Ok(RankSummary {
        stat_survivors: stat_ranking.len(),
        temporal_survivors: temporal_ranking.len(),
    })
}

fn must_exist(role: &'static str, path: &Path) -> Result<PathBuf, PipelineError> {
    if path.exists() {
        Ok(path.to_path_buf())
    } else {
        Err(PipelineError::MissingFile { role, path: path.to_path_buf() })
    }
}

#[derive(Clone, Debug)]
pub struct SweepSummary {
    pub configs: usize,
    pub completed: usize,
    pub failed: usize,
}

/// Evaluates the fusion grid by cross-validated forests and writes the
/// sweep artifacts.
pub fn run_sweep_stage(config: &RunConfig) -> Result<SweepSummary, PipelineError> {
    config.validate()?;
    let stat = FeatureMatrix::read_csv(
        &must_exist("statistical features", &config.artifact(STAT_FEATURES_FILE))?,
        DomainTag::Statistical,
    )?;
    let temporal = FeatureMatrix::read_csv(
        &must_exist("spatio-temporal features", &config.artifact(TEMPORAL_FEATURES_FILE))?,
        DomainTag::SpatioTemporal,
    )?;
    let stat_ranking = read_ranking("statistical ranking", &config.artifact(STAT_RANKING_FILE))?;
    let temporal_ranking =
        read_ranking("spatio-temporal ranking", &config.artifact(TEMPORAL_RANKING_FILE))?;

    let grid = enumerate_grid(config.grid, config.top_features)?;
    let sweep_config =
        SweepConfig { folds: config.folds, estimators: config.estimators, seed: config.seed };
    let report =
        run_sweep(&stat, &stat_ranking, &temporal, &temporal_ranking, &grid, &sweep_config);
    write_sweep_outputs(&config.output_dir, &report)?;
    Ok(SweepSummary {
        configs: grid.len(),
        completed: report.outcomes.len(),
        failed: report.failures.len(),
    })
}

fn read_sweep_results(path: &Path) -> Result<Vec<SweepOutcome>, PipelineError> {
    let mut text = String::new();
    open_artifact("sweep results", path)?.read_to_string(&mut text)?;
    let malformed = |line: usize, reason: &str| PipelineError::Artifact {
        path: path.to_path_buf(),
        line,
        reason: reason.to_string(),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.starts_with("n_stat,n_temporal,accuracy_mean") => {}
        _ => return Err(malformed(1, "expected sweep results header")),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(malformed(i + 1, "expected 10 fields"));
        }
        let nums: Vec<f64> = fields[2..]
            .iter()
            .map(|s| parse_f64(s).ok_or_else(|| malformed(i + 1, "bad metric")))
            .collect::<Result<_, _>>()?;
        let pair = |j: usize| MeanStd { mean: nums[2 * j], std: nums[2 * j + 1] };
        out.push(SweepOutcome {
            n_stat: fields[0].parse().map_err(|_| malformed(i + 1, "bad n_stat"))?,
            n_temporal: fields[1].parse().map_err(|_| malformed(i + 1, "bad n_temporal"))?,
            summary: CvSummary {
                folds: Vec::new(),
                accuracy: pair(0),
                precision: pair(1),
                recall: pair(2),
                f1: pair(3),
            },
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ReportSummary {
    pub zero_rule_accuracy: f64,
    pub one_rule_stat_accuracy: f64,
    pub one_rule_temporal_accuracy: f64,
    pub best: Option<(usize, usize, f64)>,
}

struct BaselineRow {
    rule: &'static str,
    domain: &'static str,
    attribute: String,
    outcome: BaselineOutcome,
}

fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let emit = |out: &mut String, cells: &[String]| {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(cell);
            for _ in cell.len()..widths[i] {
                out.push(' ');
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    let header_cells: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    emit(&mut out, &header_cells);
    let rule_len = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
    out.push_str(&"-".repeat(rule_len));
    out.push('\n');
    for row in rows {
        emit(&mut out, row);
    }
    out
}

fn metric_cell(mean: f64, std: f64, decimals: usize) -> String {
    format!("{mean:.decimals$} ({std:.decimals$})")
}

fn outcome_cells(o: &SweepOutcome) -> Vec<String> {
    vec![
        o.n_stat.to_string(),
        o.n_temporal.to_string(),
        metric_cell(o.summary.accuracy.mean, o.summary.accuracy.std, 2),
        metric_cell(o.summary.precision.mean, o.summary.precision.std, 3),
        metric_cell(o.summary.recall.mean, o.summary.recall.std, 3),
        metric_cell(o.summary.f1.mean, o.summary.f1.std, 3),
    ]
}

/// Digests the run into summary tables: mean F-score of the top-N raw
/// channels, baseline-rule accuracies, the ten best sweep
/// configurations, and the best configuration per feature-set kind.
pub fn run_report(config: &RunConfig) -> Result<ReportSummary, PipelineError> {
    config.validate()?;
    let stat = FeatureMatrix::read_csv(
        &must_exist("statistical features", &config.artifact(STAT_FEATURES_FILE))?,
        DomainTag::Statistical,
    )?;
    let temporal = FeatureMatrix::read_csv(
        &must_exist("spatio-temporal features", &config.artifact(TEMPORAL_FEATURES_FILE))?,
        DomainTag::SpatioTemporal,
    )?;
    let raw_scores = read_raw_ranking(&config.artifact(RAW_RANKING_FILE))?;
    let sweep = read_sweep_results(&config.artifact(SWEEP_RESULTS_FILE))?;

    // Mean F over the top-N raw channels, N killed at the finite-score
    // count the way the mean itself is.
    let finite = raw_scores.iter().filter(|r| r.f.is_finite()).count();
    let mut cuts: Vec<usize> = Vec::new();
    if finite >= 1 {
        cuts.push(1);
        let mut n = 50;
        while n < finite {
            cuts.push(n);
            n += 50;
        }
        if cuts.last() != Some(&finite) {
            cuts.push(finite);
        }
    }
    let mut mean_f_rows = Vec::new();
    for &n in &cuts {
        let m = mean_top_n(&raw_scores, n)?;
        mean_f_rows.push((n, m.mean, n == finite));
    }
    {
        let mut out = BufWriter::new(File::create(config.artifact(MEAN_F_FILE))?);
        writeln!(out, "top_n,mean_f")?;
        for (n, mean, _) in &mean_f_rows {
            writeln!(out, "{},{}", n, fmt_f64(*mean))?;
        }
        out.flush()?;
    }

    // Baseline rules, scored in-sample like any single-attribute rule.
    let zero = fit_zero_rule(&stat.class_ids, stat.classes.len())?;
    let modal = zero.predict();
    let zero_outcome = BaselineOutcome::from_predictions(
        &vec![modal; stat.class_ids.len()],
        &stat.class_ids,
    );
    let one_stat = fit_one_rule(&stat)?;
    let one_stat_outcome =
        BaselineOutcome::from_predictions(&predict_all(&stat, &one_stat), &stat.class_ids);
    let one_temporal = fit_one_rule(&temporal)?;
    let one_temporal_outcome = BaselineOutcome::from_predictions(
        &predict_all(&temporal, &one_temporal),
        &temporal.class_ids,
    );
    let baselines = vec![
        BaselineRow {
            rule: "zero_rule",
            domain: "n/a",
            attribute: format!("most common class: {}", stat.classes[modal]),
            outcome: zero_outcome,
        },
        BaselineRow {
            rule: "one_rule",
            domain: "statistical",
            attribute: one_stat.column_name.clone(),
            outcome: one_stat_outcome,
        },
        BaselineRow {
            rule: "one_rule",
            domain: "spatio_temporal",
            attribute: one_temporal.column_name.clone(),
            outcome: one_temporal_outcome,
        },
    ];
    {
        let mut w = csv::Writer::from_path(config.artifact(BASELINES_FILE))?;
        w.write_record(["rule", "domain", "attribute", "correct", "total", "accuracy_pct"])?;
        for b in &baselines {
            w.write_record([
                b.rule.to_string(),
                b.domain.to_string(),
                b.attribute.clone(),
                b.outcome.correct.to_string(),
                b.outcome.total.to_string(),
                fmt_f64(b.outcome.accuracy_pct),
            ])?;
        }
        w.flush()?;
    }

    // Best configuration per feature-set kind.
    let mut sorted: Vec<&SweepOutcome> = sweep.iter().collect();
    sorted.sort_by(|a, b| {
        b.summary
            .accuracy
            .mean
            .total_cmp(&a.summary.accuracy.mean)
            .then_with(|| a.n_stat.cmp(&b.n_stat))
            .then_with(|| a.n_temporal.cmp(&b.n_temporal))
    });
    let kinds: [(&str, Box<dyn Fn(usize, usize) -> bool>); 3] = [
        ("mixed", Box::new(|ns, nt| ns > 0 && nt > 0)),
        ("statistical_only", Box::new(|_, nt| nt == 0)),
        ("spatio_temporal_only", Box::new(|ns, _| ns == 0)),
    ];
    let mut best_rows: Vec<(&str, &SweepOutcome)> = Vec::new();
    for (kind, pred) in &kinds {
        if let Some(o) = sorted.iter().find(|o| pred(o.n_stat, o.n_temporal)) {
            best_rows.push((kind, o));
        }
    }
    {
        let mut out = BufWriter::new(File::create(config.artifact(BEST_OF_EACH_FILE))?);
        writeln!(
            out,
            "kind,n_stat,n_temporal,accuracy_mean,accuracy_std,precision_mean,precision_std,recall_mean,recall_std,f1_mean,f1_std"
        )?;
        for (kind, o) in &best_rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                kind,
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
            )?;
        }
        out.flush()?;
    }

    // Plain-text digest of all four tables.
    let mut report = String::new();
    report.push_str("gesture pipeline report\n");
    report.push_str("=======================\n\n");
    report.push_str(&format!(
        "windows: {}   classes: {}   folds: {}   trees: {}   seed: {}\n\n",
        stat.n_rows(),
        stat.classes.len(),
        config.folds,
        config.estimators,
        config.seed
    ));

    report.push_str("mean F-score of the top-N raw channels\n\n");
    let rows: Vec<Vec<String>> = mean_f_rows
        .iter()
        .map(|(n, mean, is_all)| {
            vec![
                if *is_all && cuts.len() > 1 { format!("{n} (all)") } else { n.to_string() },
                format!("{mean:.2}"),
            ]
        })
        .collect();
    report.push_str(&render_table(&["top_n", "mean_f"], &rows));
    report.push('\n');

    report.push_str("baseline rules (in-sample)\n\n");
    let rows: Vec<Vec<String>> = baselines
        .iter()
        .map(|b| {
            vec![
                b.rule.to_string(),
                b.domain.to_string(),
                b.attribute.clone(),
                format!("{}/{}", b.outcome.correct, b.outcome.total),
                format!("{:.2}%", b.outcome.accuracy_pct),
            ]
        })
        .collect();
    report.push_str(&render_table(&["rule", "domain", "attribute", "correct", "total", "accuracy"], &rows));
    report.push('\n');

    report.push_str("ten best sweep configurations (mean over folds, std in parentheses)\n\n");
    let rows: Vec<Vec<String>> = sorted.iter().take(10).map(|o| outcome_cells(o)).collect();
    report.push_str(&render_table(
        &["n_stat", "n_temporal", "accuracy", "precision", "recall", "f1"],
        &rows,
    ));
    report.push('\n');

    report.push_str("best configuration per feature set\n\n");
    let rows: Vec<Vec<String>> = best_rows
        .iter()
        .map(|(kind, o)| {
            let mut cells = vec![kind.to_string()];
            cells.extend(outcome_cells(o));
            cells
        })
        .collect();
    report.push_str(&render_table(
        &["kind", "n_stat", "n_temporal", "accuracy", "precision", "recall", "f1"],
        &rows,
    ));

    std::fs::write(config.artifact(REPORT_FILE), &report)?;

    Ok(ReportSummary {
        zero_rule_accuracy: baselines[0].outcome.accuracy_pct,
        one_rule_stat_accuracy: baselines[1].outcome.accuracy_pct,
        one_rule_temporal_accuracy: baselines[2].outcome.accuracy_pct,
        best: sorted
            .first()
            .map(|o| (o.n_stat, o.n_temporal, o.summary.accuracy.mean)),
    })
}

/// Reads ranked_channels_raw.csv back as a ranking (all channels, not
/// just the selected ones).
fn read_raw_ranking(path: &Path) -> Result<Vec<Ranked>, PipelineError> {
    let mut text = String::new();
    open_artifact("raw channel ranking", path)?.read_to_string(&mut text)?;
    let malformed = |line: usize, reason: &str| PipelineError::Artifact {
        path: path.to_path_buf(),
        line,
        reason: reason.to_string(),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == "rank,stable_name,f_value,p_value,selected" => {}
        _ => return Err(malformed(1, "expected raw ranking header")),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(malformed(i + 1, "expected 5 fields"));
        }
        out.push(Ranked {
            rank: fields[0].parse().map_err(|_| malformed(i + 1, "bad rank"))?,
            stable_name: fields[1].to_string(),
            f: parse_f64(fields[2]).ok_or_else(|| malformed(i + 1, "bad f_value"))?,
            p: parse_f64(fields[3]).ok_or_else(|| malformed(i + 1, "bad p_value"))?,
        });
    }
    Ok(out)
}

/// Runs every stage in order against one output directory.
pub fn run_all(config: &RunConfig) -> Result<ReportSummary, PipelineError> {
    run_synth(config)?;
    run_extract(config)?;
    run_rank(config)?;
    run_sweep_stage(config)?;
    run_report(config)
}

fn predict_all(matrix: &FeatureMatrix, rule: &OneRule) -> Vec<usize> {
    (0..matrix.n_rows()).map(|r| rule.predict(matrix.row(r))).collect()
}

/// Convenience used by tests and the CLI: a small, fast configuration.
pub fn quick_config(dir: &Path) -> RunConfig {
    RunConfig {
        output_dir: dir.to_path_buf(),
        classes: 4,
        recordings_per_class: 12,
        channels: 12,
        informative_fraction: 0.75,
        top_raw_channels: 9,
        top_features: 30,
        folds: 3,
        estimators: 15,
        ..RunConfig::default()
    }
}
