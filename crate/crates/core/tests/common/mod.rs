//! Brute-force reference implementations shared by the oracle and
//! acceptance suites. Everything here is written from the definitions,
//! independently of the library code it checks.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct OracleWindow {
    pub samples: Vec<f64>,
    pub timestamps: Vec<f64>,
}

/// Deterministic window zoo: continuous, quantized (ties), and constant
/// windows, over regular and irregular strictly-increasing time grids.
pub fn oracle_window(rng: &mut ChaCha8Rng, n: usize, style: usize) -> OracleWindow {
    let samples: Vec<f64> = match style % 10 {
        7 | 8 => (0..n).map(|_| (rng.gen_range(-10.0..10.0f64) * 2.0).round() / 2.0).collect(),
        9 => {
            let c = if style % 20 == 9 { 0.0 } else { rng.gen_range(-5.0..5.0) };
            vec![c; n]
        }
        _ => (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect(),
    };
    let timestamps: Vec<f64> = if style % 2 == 0 {
        let t0: f64 = rng.gen_range(0.0..10.0);
        (0..n).map(|i| t0 + i as f64 * 0.2).collect()
    } else {
        let mut ts: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..50.0)).collect();
        ts.sort_unstable_by(f64::total_cmp);
        // nudge apart so the grid is strictly increasing even if two
        // draws collide
        for (i, t) in ts.iter_mut().enumerate() {
            *t += i as f64 * 1e-7;
        }
        ts
    };
    OracleWindow { samples, timestamps }
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut s = xs.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    s
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn central_moment(xs: &[f64], k: i32) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(k)).sum::<f64>() / xs.len() as f64
}

/// Textbook linear-interpolation quantile: h = (n-1)p between floor and
/// ceil order statistics.
fn quantile_oracle(xs: &[f64], p: f64) -> f64 {
    let s = sorted(xs);
    let h = (s.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    s[lo] * (1.0 - (h - lo as f64)) + s[hi] * (h - lo as f64)
}

fn median_oracle(xs: &[f64]) -> f64 {
    let s = sorted(xs);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2.0
    }
}

/// Reference for one statistical column identified by (family, sub).
pub fn statistical_oracle(
    family: &str,
    sub: Option<u32>,
    samples: &[f64],
    timestamps: &[f64],
) -> f64 {
    let n = samples.len();
    let s = sorted(samples);
    match (family, sub) {
        ("absolute_energy", None) => samples.iter().map(|x| x * x).sum(),
        ("average_power", None) => {
            samples.iter().map(|x| x * x).sum::<f64>() / (timestamps[n - 1] - timestamps[0])
        }
        ("ecdf", Some(k)) => s[k as usize],
        ("ecdf_percentile", Some(k)) => {
            let p = [0.2, 0.8][k as usize];
            let idx = (p * n as f64).ceil() as usize - 1;
            s[idx.min(n - 1)]
        }
        ("ecdf_percentile_count", Some(k)) => {
            let v = statistical_oracle("ecdf_percentile", Some(k), samples, timestamps);
            samples.iter().filter(|x| **x <= v).count() as f64
        }
        ("entropy", None) => {
            let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
            for x in samples {
                // +0.0 folds -0.0 into +0.0 so both zeros count as one value
                *counts.entry((x + 0.0).to_bits()).or_insert(0) += 1;
            }
            if counts.len() <= 1 {
                return 0.0;
            }
            let h: f64 = counts
                .values()
                .map(|&c| {
                    let p = c as f64 / n as f64;
                    -p * p.log2()
                })
                .sum();
            h / (counts.len() as f64).log2()
        }
        ("histogram", Some(k)) => {
            let (min, max) = (s[0], s[n - 1]);
            if min == max {
                return if k == 0 { n as f64 } else { 0.0 };
            }
            let width = (max - min) / 10.0;
            samples
                .iter()
                .filter(|x| {
                    let bin = (((**x - min) / width).floor() as usize).min(9);
                    bin == k as usize
                })
                .count() as f64
        }
        ("interquartile_range", None) => {
            quantile_oracle(samples, 0.75) - quantile_oracle(samples, 0.25)
        }
        ("kurtosis", None) => {
            let m2 = central_moment(samples, 2);
            if m2 == 0.0 {
                0.0
            } else {
                central_moment(samples, 4) / (m2 * m2) - 3.0
            }
        }
        ("max", None) => s[n - 1],
        ("mean", None) => mean(samples),
        ("mean_absolute_deviation", None) => {
            let m = mean(samples);
            samples.iter().map(|x| (x - m).abs()).sum::<f64>() / n as f64
        }
        ("median", None) => median_oracle(samples),
        ("median_absolute_deviation", None) => {
            let med = median_oracle(samples);
            let dev: Vec<f64> = samples.iter().map(|x| (x - med).abs()).collect();
            median_oracle(&dev)
        }
        ("min", None) => s[0],
        ("peak_to_peak", None) => s[n - 1] - s[0],
        ("rms", None) => (samples.iter().map(|x| x * x).sum::<f64>() / n as f64).sqrt(),
        ("skewness", None) => {
            let m2 = central_moment(samples, 2);
            if m2 == 0.0 {
                0.0
            } else {
                central_moment(samples, 3) / m2.powf(1.5)
            }
        }
        ("standard_deviation", None) => central_moment(samples, 2).sqrt(),
        ("variance", None) => central_moment(samples, 2),
        other => panic!("no statistical oracle for {other:?}"),
    }
}

/// Reference for one spatio-temporal column.
pub fn temporal_oracle(family: &str, samples: &[f64], timestamps: &[f64]) -> f64 {
    let n = samples.len();
    let diffs: Vec<f64> = (1..n).map(|i| samples[i] - samples[i - 1]).collect();
    match family {
        "area_under_curve" => (1..n)
            .map(|i| 0.5 * (timestamps[i] - timestamps[i - 1]) * (samples[i - 1] + samples[i]))
            .sum(),
        "autocorrelation" => (1..n).map(|i| samples[i - 1] * samples[i]).sum(),
        "centroid" => {
            let energy: f64 = samples.iter().map(|x| x * x).sum();
            if energy == 0.0 {
                0.0
            } else {
                (0..n).map(|i| timestamps[i] * samples[i] * samples[i]).sum::<f64>() / energy
            }
        }
        "mean_diff" => mean(&diffs),
        "mean_abs_diff" => diffs.iter().map(|d| d.abs()).sum::<f64>() / diffs.len() as f64,
        "median_diff" => median_oracle(&diffs),
        "median_abs_diff" => {
            let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
            median_oracle(&abs)
        }
        "positive_turning_points" => (1..n - 1)
            .filter(|&i| samples[i - 1] < samples[i] && samples[i] > samples[i + 1])
            .count() as f64,
        "negative_turning_points" => (1..n - 1)
            .filter(|&i| samples[i - 1] > samples[i] && samples[i] < samples[i + 1])
            .count() as f64,
        "neighbourhood_peaks" => {
            let radius = 10usize;
            (1..n.saturating_sub(1))
                .filter(|&i| {
                    let lo = i.saturating_sub(radius);
                    let hi = (i + radius).min(n - 1);
                    (lo..=hi).all(|j| j == i || samples[j] < samples[i])
                })
                .count() as f64
        }
        "slope" => {
            let nf = n as f64;
            let st: f64 = timestamps.iter().sum();
            let sx: f64 = samples.iter().sum();
            let stx: f64 = timestamps.iter().zip(samples).map(|(t, x)| t * x).sum();
            let stt: f64 = timestamps.iter().map(|t| t * t).sum();
            (nf * stx - st * sx) / (nf * stt - st * st)
        }
        "sum_abs_diff" => diffs.iter().map(|d| d.abs()).sum(),
        "zero_crossing_rate" => {
            (1..n).filter(|&i| samples[i - 1] * samples[i] < 0.0).count() as f64 / (n - 1) as f64
        }
        other => panic!("no temporal oracle for {other:?}"),
    }
}

/// Stirling-series log-gamma (independent of the library's Lanczos fit).
pub fn lgamma_oracle(x: f64) -> f64 {
    let mut x = x;
    let mut shift = 0.0;
    while x < 12.0 {
        shift -= x.ln();
        x += 1.0;
    }
    // Bernoulli-number asymptotic series
    let coefficients = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let x2 = x * x;
    let mut power = x;
    let mut series = 0.0;
    for c in coefficients {
        series += c / power;
        power *= x2;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series + shift
}

fn simpson_rec(
    g: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    ga: f64,
    gm: f64,
    gb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let glm = g(lm);
    let grm = g(rm);
    let left = (m - a) / 6.0 * (ga + 4.0 * glm + gm);
    let right = (b - m) / 6.0 * (gm + 4.0 * grm + gb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(g, a, m, ga, glm, gm, left, 0.5 * tol, depth - 1)
            + simpson_rec(g, m, b, gm, grm, gb, right, 0.5 * tol, depth - 1)
    }
}

fn adaptive_simpson(g: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let ga = g(a);
    let gb = g(b);
    let gm = g(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (ga + 4.0 * gm + gb);
    simpson_rec(g, a, b, ga, gm, gb, whole, tol, 60)
}

/// Survival function of the F(d1, d2) distribution by adaptive Simpson
/// integration of the density over [0, f], with the substitution x = u^2
/// to remove the d1 = 1 endpoint singularity.
pub fn f_survival_oracle(f: f64, d1: f64, d2: f64) -> f64 {
    let ln_c = lgamma_oracle((d1 + d2) / 2.0) - lgamma_oracle(d1 / 2.0) - lgamma_oracle(d2 / 2.0)
        + (d1 / 2.0) * (d1.ln() - d2.ln());
    // g(u) = 2 u^(d1-1) (1 + d1 u^2 / d2)^(-(d1+d2)/2) * C
    let g = move |u: f64| -> f64 {
        if u == 0.0 {
            return if d1 == 1.0 { 2.0 * ln_c.exp() } else { 0.0 };
        }
        let ln_g = ln_c + std::f64::consts::LN_2 + (d1 - 1.0) * u.ln()
            - 0.5 * (d1 + d2) * (1.0 + d1 * u * u / d2).ln();
        ln_g.exp()
    };
    // A single adaptive pass can miss the narrow bulk at large degrees
    // of freedom (all probe points land in the flat tails), so integrate
    // over a fine fixed partition and let each panel refine itself.
    let b = f.sqrt();
    let fine_end = b.min(3.0);
    let n_fine = ((fine_end / 0.005).ceil() as usize).max(1);
    let mut edges: Vec<f64> = (0..=n_fine).map(|i| fine_end * i as f64 / n_fine as f64).collect();
    if b > fine_end {
        let n_coarse = (((b - fine_end) / 0.1).ceil() as usize).max(1);
        edges.extend((1..=n_coarse).map(|i| fine_end + (b - fine_end) * i as f64 / n_coarse as f64));
    }
    let cdf: f64 = edges.windows(2).map(|w| adaptive_simpson(&g, w[0], w[1], 1e-13)).sum();
    1.0 - cdf
}

/// Runs every extracted feature of both domains against the brute-force
/// oracles over `n_windows` generated windows of length `n`. Panics on
/// the first disagreement; returns the number of comparisons made.
pub fn run_feature_oracle_battery(n: usize, n_windows: usize, seed: u64) -> usize {
    use approx::assert_relative_eq;
    use gesturekit::features::{
        extract_statistical, extract_temporal, statistical_layout, temporal_layout, StatOptions,
    };
    use rand::SeedableRng;

    let opts = StatOptions::default();
    let stat_layout = statistical_layout(n, &opts);
    let temp_layout = temporal_layout();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comparisons = 0usize;

    for i in 0..n_windows {
        let w = oracle_window(&mut rng, n, i);
        let stat = extract_statistical(&w.samples, &w.timestamps, &opts).unwrap();
        assert_eq!(stat.len(), stat_layout.len());
        for ((family, sub), got) in stat_layout.iter().zip(&stat) {
            let want = statistical_oracle(family, *sub, &w.samples, &w.timestamps);
            assert_relative_eq!(
                *got,
                want,
                max_relative = 1e-9,
                epsilon = 1e-12
            );
            comparisons += 1;
        }
        let temp = extract_temporal(&w.samples, &w.timestamps).unwrap();
        assert_eq!(temp.len(), temp_layout.len());
        for ((family, _), got) in temp_layout.iter().zip(&temp) {
            let want = temporal_oracle(family, &w.samples, &w.timestamps);
            assert_relative_eq!(
                *got,
                want,
                max_relative = 1e-9,
                epsilon = 1e-12
            );
            comparisons += 1;
        }
    }
    comparisons
}

/// Pooled two-sample t statistic (the classic equal-variance form).
pub fn pooled_t(a: &[f64], b: &[f64]) -> f64 {
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let (m1, m2) = (mean(a), mean(b));
    let ss1: f64 = a.iter().map(|x| (x - m1).powi(2)).sum();
    let ss2: f64 = b.iter().map(|x| (x - m2).powi(2)).sum();
    let pooled = (ss1 + ss2) / (n1 + n2 - 2.0);
    (m1 - m2) / (pooled * (1.0 / n1 + 1.0 / n2)).sqrt()
}
