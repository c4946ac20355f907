//! Microbenchmarks for the compute-bound paths: per-window feature
//! extraction, the F statistic with its tail probability, and forest
//! training.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gesturekit::classify::{train_forest, ForestConfig};
use gesturekit::experiment::{generate_synth, SynthConfig};
use gesturekit::features::{
    extract_matrix, extract_statistical, extract_temporal, DomainTag, FeatureMatrix, StatOptions,
};
use gesturekit::ingest::windowize;
use gesturekit::select::{anova_f, f_survival};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn window(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
    let timestamps = (0..n).map(|i| i as f64 * 0.2).collect();
    (samples, timestamps)
}

fn feature_extraction(c: &mut Criterion) {
    let opts = StatOptions::default();
    for n in [3usize, 100] {
        let (samples, timestamps) = window(n);
        c.bench_function(&format!("statistical features, n={n}"), |b| {
            b.iter(|| extract_statistical(black_box(&samples), black_box(&timestamps), &opts).unwrap())
        });
        c.bench_function(&format!("spatio-temporal features, n={n}"), |b| {
            b.iter(|| extract_temporal(black_box(&samples), black_box(&timestamps)).unwrap())
        });
    }
}

fn f_scoring(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 3294;
    let classes = 18;
    let values: Vec<f64> =
        (0..n).map(|i| rng.gen_range(-1.0..1.0) + (i % classes) as f64 * 0.1).collect();
    let ids: Vec<usize> = (0..n).map(|i| i % classes).collect();
    c.bench_function("anova over one column, 3294 windows, 18 classes", |b| {
        b.iter(|| anova_f(black_box(&values), black_box(&ids), classes).unwrap())
    });
    c.bench_function("f tail probability", |b| {
        b.iter(|| f_survival(black_box(2.37), black_box(17.0), black_box(3276.0)))
    });
}

fn training_matrix() -> FeatureMatrix {
    let config = SynthConfig {
        classes: 4,
        recordings_per_class: 40,
        frames_per_recording: 3,
        channels: 12,
        informative_fraction: 0.75,
        ..Default::default()
    };
    let (stream, _) = generate_synth(&config).unwrap();
    let windows = windowize(&stream, 3, 1).unwrap();
    let names: Vec<String> = stream.channels.iter().map(|c| c.stable_name.clone()).collect();
    extract_matrix(&stream, &windows, &names, DomainTag::Statistical, &StatOptions::default()).unwrap()
}

fn forest_training(c: &mut Criterion) {
    let matrix = training_matrix();
    let mut group = c.benchmark_group("forest");
    group.sample_size(10);
    group.bench_function(
        &format!("train 30 trees on {}x{}", matrix.n_rows(), matrix.n_cols()),
        |b| {
            b.iter(|| {
                train_forest(black_box(&matrix), &ForestConfig { n_estimators: 30, seed: 1 }).unwrap()
            })
        },
    );
    group.finish();
}

criterion_group!(benches, feature_extraction, f_scoring, forest_training);
criterion_main!(benches);
