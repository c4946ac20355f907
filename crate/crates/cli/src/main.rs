//! Batch front end: `gesturekit <synth|extract|rank|sweep|report>`.
//!
//! Settings resolve in three layers: built-in defaults, then a flat
//! `key = value` config file (`--config`), then command-line flags. The
//! `--jobs` flag caps rayon's worker count; artifacts are byte-identical
//! at any setting.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use gesturekit::experiment::{GridKind, SynthProfile};
use gesturekit::pipeline::{
    run_extract, run_rank, run_report, run_sweep_stage, run_synth, RunConfig,
};

#[derive(Parser)]
#[command(name = "gesturekit", version, about = "Windowed gesture classification pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat `key = value` config file; later flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Cap on rayon worker threads (does not change any output).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(flatten)]
    overrides: Overrides,
}

/// One optional flag per config key, named after the key.
#[derive(Args)]
struct Overrides {
    /// Frame CSV to ingest (default: <output-dir>/dataset.csv).
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Directory all artifacts are written to.
    #[arg(long, global = true, value_name = "DIR")]
    output_dir: Option<PathBuf>,
    /// Frames per sliding window.
    #[arg(long, global = true, value_name = "N")]
    window_len: Option<usize>,
    /// Window step in frames.
    #[arg(long, global = true, value_name = "N")]
    stride: Option<usize>,
    /// Raw channels kept after the channel screen.
    #[arg(long, global = true, value_name = "N")]
    top_raw_channels: Option<usize>,
    /// Significance level for the F-test filter.
    #[arg(long, global = true, value_name = "A")]
    alpha: Option<f64>,
    /// Per-domain column budget for the sweep grid.
    #[arg(long, global = true, value_name = "N")]
    top_features: Option<usize>,
    /// Cross-validation folds.
    #[arg(long, global = true, value_name = "K")]
    folds: Option<usize>,
    /// Trees per forest.
    #[arg(long, global = true, value_name = "N")]
    estimators: Option<usize>,
    /// Master seed for every randomized component.
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,
    /// Sweep grid kind: single_stat, single_temporal, complement, equal, full_grid.
    #[arg(long, global = true, value_name = "KIND")]
    grid: Option<String>,
    /// Synthetic gesture classes.
    #[arg(long, global = true, value_name = "N")]
    classes: Option<usize>,
    /// Synthetic recordings per class.
    #[arg(long, global = true, value_name = "N")]
    recordings_per_class: Option<usize>,
    /// Synthetic frames per recording.
    #[arg(long, global = true, value_name = "N")]
    frames_per_recording: Option<usize>,
    /// Synthetic channel count.
    #[arg(long, global = true, value_name = "N")]
    channels: Option<usize>,
    /// Fraction of synthetic channels that carry class information.
    #[arg(long, global = true, value_name = "F")]
    informative_fraction: Option<f64>,
    /// Synthetic noise amplitude.
    #[arg(long, global = true, value_name = "A")]
    noise: Option<f64>,
    /// Synthetic profile: standard or complementary.
    #[arg(long, global = true, value_name = "NAME")]
    profile: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset CSV.
    Synth,
    /// Screen raw channels and extract both feature matrices.
    Extract,
    /// Score and filter extracted features per domain.
    Rank,
    /// Cross-validate forests over the fusion grid.
    Sweep,
    /// Render baseline, top-10, and best-of-each tables.
    Report,
}

const CONFIG_KEYS: &[&str] = &[
    "input",
    "output_dir",
    "window_len",
    "stride",
    "top_raw_channels",
    "alpha",
    "top_features",
    "folds",
    "estimators",
    "seed",
    "grid",
    "classes",
    "recordings_per_class",
    "frames_per_recording",
    "channels",
    "informative_fraction",
    "noise",
    "profile",
];

fn apply_pair(config: &mut RunConfig, key: &str, value: &str) -> Result<()> {
    fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
        value.parse().map_err(|_| anyhow::anyhow!("bad value `{value}` for key `{key}`"))
    }
    match key {
        "input" => config.input = Some(PathBuf::from(value)),
        "output_dir" => config.output_dir = PathBuf::from(value),
        "window_len" => config.window_len = parse(key, value)?,
        "stride" => config.stride = parse(key, value)?,
        "top_raw_channels" => config.top_raw_channels = parse(key, value)?,
        "alpha" => config.alpha = parse(key, value)?,
        "top_features" => config.top_features = parse(key, value)?,
        "folds" => config.folds = parse(key, value)?,
        "estimators" => config.estimators = parse(key, value)?,
        "seed" => config.seed = parse(key, value)?,
        "grid" => config.grid = value.parse::<GridKind>()?,
        "classes" => config.classes = parse(key, value)?,
        "recordings_per_class" => config.recordings_per_class = parse(key, value)?,
        "frames_per_recording" => config.frames_per_recording = parse(key, value)?,
        "channels" => config.channels = parse(key, value)?,
        "informative_fraction" => config.informative_fraction = parse(key, value)?,
        "noise" => config.noise = parse(key, value)?,
        "profile" => config.profile = value.parse::<SynthProfile>()?,
        other => bail!("unknown config key `{other}` (expected one of: {})", CONFIG_KEYS.join(", ")),
    }
    Ok(())
}

fn apply_config_file(config: &mut RunConfig, path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {path:?}"))?;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{path:?} line {}: expected `key = value`, got `{raw}`", i + 1);
        };
        apply_pair(config, key.trim(), value.trim())
            .with_context(|| format!("{path:?} line {}", i + 1))?;
    }
    Ok(())
}

impl Overrides {
    fn apply(self, config: &mut RunConfig) -> Result<()> {
        if let Some(v) = self.input {
            config.input = Some(v);
        }
        if let Some(v) = self.output_dir {
            config.output_dir = v;
        }
        if let Some(v) = self.window_len {
            config.window_len = v;
        }
        if let Some(v) = self.stride {
            config.stride = v;
        }
        if let Some(v) = self.top_raw_channels {
            config.top_raw_channels = v;
        }
        if let Some(v) = self.alpha {
            config.alpha = v;
        }
        if let Some(v) = self.top_features {
            config.top_features = v;
        }
        if let Some(v) = self.folds {
            config.folds = v;
        }
        if let Some(v) = self.estimators {
            config.estimators = v;
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if let Some(v) = self.grid {
            config.grid = v.parse::<GridKind>()?;
        }
        if let Some(v) = self.classes {
            config.classes = v;
        }
        if let Some(v) = self.recordings_per_class {
            config.recordings_per_class = v;
        }
        if let Some(v) = self.frames_per_recording {
            config.frames_per_recording = v;
        }
        if let Some(v) = self.channels {
            config.channels = v;
        }
        if let Some(v) = self.informative_fraction {
            config.informative_fraction = v;
        }
        if let Some(v) = self.noise {
            config.noise = v;
        }
        if let Some(v) = self.profile {
            config.profile = v.parse::<SynthProfile>()?;
        }
        Ok(())
    }
}

fn dispatch(command: Command, config: &RunConfig) -> Result<ExitCode> {
    match command {
        Command::Synth => {
            let s = run_synth(config)?;
            println!(
                "synth: {} frames on {} channels ({} informative, {} not) -> {:?}",
                s.frames, s.channels, s.informative, s.uninformative, s.path
            );
        }
        Command::Extract => {
            let s = run_extract(config)?;
            println!(
                "extract: kept {}/{} channels{} -> {} windows, {} statistical + {} spatio-temporal columns",
                s.selected_channels,
                s.raw_channels,
                if s.shortfall { " (short of the requested budget)" } else { "" },
                s.windows,
                s.stat_columns,
                s.temporal_columns
            );
        }
        Command::Rank => {
            let s = run_rank(config)?;
            println!(
                "rank: {} statistical and {} spatio-temporal columns survive the filter",
                s.stat_survivors, s.temporal_survivors
            );
        }
        Command::Sweep => {
            let s = run_sweep_stage(config)?;
            println!("sweep: {}/{} configs completed, {} failed", s.completed, s.configs, s.failed);
            if s.failed > 0 {
                eprintln!("sweep: see sweep_failures.csv");
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Report => {
            let s = run_report(config)?;
            println!(
                "report: zero_rule {:.2}%, one_rule {:.2}% (statistical) / {:.2}% (spatio-temporal)",
                s.zero_rule_accuracy, s.one_rule_stat_accuracy, s.one_rule_temporal_accuracy
            );
            if let Some((ns, nt, acc)) = s.best {
                println!("report: best config ({ns}, {nt}) at {acc:.2}% mean accuracy");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("rayon pool already initialized")?;
    }
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        apply_config_file(&mut config, path)?;
    }
    cli.overrides.apply(&mut config)?;
    dispatch(cli.command, &config)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
