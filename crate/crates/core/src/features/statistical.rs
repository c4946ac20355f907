//! Order-independent descriptors of a window's value distribution.
//! Twenty families; the multi-output ones (ECDF values, percentiles,
//! percentile counts, histogram) expand into sub-indexed columns.

use super::FeatureError;

/// Histogram bin count is fixed; the ECDF value list length is capped at
/// `ecdf_len` (shorter windows emit fewer).
#[derive(Clone, Debug)]
pub struct StatOptions {
    pub ecdf_len: usize,
}

impl Default for StatOptions {
    fn default() -> Self {
        StatOptions { ecdf_len: 10 }
    }
}

pub const HISTOGRAM_BINS: usize = 10;
const PERCENTILES: [f64; 2] = [0.2, 0.8];

/// (family, sub-index) layout for a window of `n` samples, in emission
/// order. Channel-independent.
pub fn statistical_layout(n: usize, opts: &StatOptions) -> Vec<(&'static str, Option<u32>)> {
    let mut layout = Vec::new();
    layout.push(("absolute_energy", None));
    layout.push(("average_power", None));
    for k in 0..opts.ecdf_len.min(n) {
        layout.push(("ecdf", Some(k as u32)));
    }
    for k in 0..PERCENTILES.len() {
        layout.push(("ecdf_percentile", Some(k as u32)));
    }
    for k in 0..PERCENTILES.len() {
        layout.push(("ecdf_percentile_count", Some(k as u32)));
    }
    layout.push(("entropy", None));
    for k in 0..HISTOGRAM_BINS {
        layout.push(("histogram", Some(k as u32)));
    }
    layout.push(("interquartile_range", None));
    layout.push(("kurtosis", None));
    layout.push(("max", None));
    layout.push(("mean", None));
    layout.push(("mean_absolute_deviation", None));
    layout.push(("median", None));
    layout.push(("median_absolute_deviation", None));
    layout.push(("min", None));
    layout.push(("peak_to_peak", None));
    layout.push(("rms", None));
    layout.push(("skewness", None));
    layout.push(("standard_deviation", None));
    layout.push(("variance", None));
    layout
}

pub(crate) fn validate_window(samples: &[f64], timestamps: &[f64]) -> Result<(), FeatureError> {
    if samples.len() < 2 {
        return Err(FeatureError::WindowTooShort { length: samples.len() });
    }
    if samples.len() != timestamps.len() {
        return Err(FeatureError::ShapeMismatch { samples: samples.len(), timestamps: timestamps.len() });
    }
    if timestamps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FeatureError::TimeOrder);
    }
    Ok(())
}

/// Extracts all statistical features for one window, matching
/// [`statistical_layout`] order.
pub fn extract_statistical(
    samples: &[f64],
    timestamps: &[f64],
    opts: &StatOptions,
) -> Result<Vec<f64>, FeatureError> {
    validate_window(samples, timestamps)?;
    let n = samples.len();
    let nf = n as f64;

    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let min = sorted[0];
    let max = sorted[n - 1];

    let energy: f64 = samples.iter().map(|x| x * x).sum();
    let mean = samples.iter().sum::<f64>() / nf;
    let m2 = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
    let m3 = samples.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / nf;
    let m4 = samples.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;

    let mut out = Vec::with_capacity(statistical_layout(n, opts).len());
    out.push(energy);
    out.push(energy / (timestamps[n - 1] - timestamps[0]));

    for k in 0..opts.ecdf_len.min(n) {
        out.push(sorted[k]);
    }

    let mut percentile_values = [0.0; PERCENTILES.len()];
    for (slot, p) in PERCENTILES.iter().enumerate() {
        // Empirical inverse CDF: the sorted value at index ceil(p*n) - 1.
        let idx = (p * nf).ceil() as usize - 1;
        percentile_values[slot] = sorted[idx.min(n - 1)];
        out.push(percentile_values[slot]);
    }
    for value in percentile_values {
        out.push(samples.iter().filter(|x| **x <= value).count() as f64);
    }

    out.push(entropy(&sorted));

    for count in histogram(samples, min, max) {
        out.push(count);
    }

    out.push(quantile(&sorted, 0.75) - quantile(&sorted, 0.25));
    out.push(if m2 == 0.0 { 0.0 } else { m4 / (m2 * m2) - 3.0 });
    out.push(max);
    out.push(mean);
    out.push(samples.iter().map(|x| (x - mean).abs()).sum::<f64>() / nf);
    let median = quantile(&sorted, 0.5);
    out.push(median);
    out.push({
        let mut dev: Vec<f64> = samples.iter().map(|x| (x - median).abs()).collect();
        dev.sort_unstable_by(f64::total_cmp);
        quantile(&dev, 0.5)
    });
    out.push(min);
    out.push(max - min);
    out.push((energy / nf).sqrt());
    out.push(if m2 == 0.0 { 0.0 } else { m3 / m2.powf(1.5) });
    out.push(m2.sqrt());
    out.push(m2);
    Ok(out)
}

/// Linear-interpolation quantile over pre-sorted values.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = h - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Shannon entropy of value frequencies (base 2), normalized by the
/// entropy of a uniform distribution over the distinct values. A window
/// with a single distinct value scores 0.
fn entropy(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    let mut h = 0.0;
    let mut distinct = 0usize;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let p = (j - i) as f64 / n;
        h -= p * p.log2();
        distinct += 1;
        i = j;
    }
    if distinct <= 1 {
        0.0
    } else {
        h / (distinct as f64).log2()
    }
}

/// Ten equal-width bins over [min, max]; the final bin includes its right
/// edge. A constant window puts all mass in bin 0.
fn histogram(samples: &[f64], min: f64, max: f64) -> [f64; HISTOGRAM_BINS] {
    let mut counts = [0.0; HISTOGRAM_BINS];
    if max == min {
        counts[0] = samples.len() as f64;
        return counts;
    }
    let width = (max - min) / HISTOGRAM_BINS as f64;
    for x in samples {
        let bin = (((x - min) / width).floor() as usize).min(HISTOGRAM_BINS - 1);
        counts[bin] += 1.0;
    }
    counts
}
