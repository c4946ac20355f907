//! Order-dependent descriptors: how a window's values evolve over time.
//! Thirteen families, each a single column per channel.

use super::statistical::validate_window;
use super::FeatureError;

/// Peaks are compared against neighbours up to this many samples away
/// (clipped at the window edges).
pub const NEIGHBOURHOOD_RADIUS: usize = 10;

/// (family, sub-index) layout in emission order. Channel-independent.
pub fn temporal_layout() -> Vec<(&'static str, Option<u32>)> {
    vec![
        ("area_under_curve", None),
        ("autocorrelation", None),
        ("centroid", None),
        ("mean_diff", None),
        ("mean_abs_diff", None),
        ("median_diff", None),
        ("median_abs_diff", None),
        ("positive_turning_points", None),
        ("negative_turning_points", None),
        ("neighbourhood_peaks", None),
        ("slope", None),
        ("sum_abs_diff", None),
        ("zero_crossing_rate", None),
    ]
}

/// Extracts all temporal features for one window, matching
/// [`temporal_layout`] order.
pub fn extract_temporal(samples: &[f64], timestamps: &[f64]) -> Result<Vec<f64>, FeatureError> {
    validate_window(samples, timestamps)?;
    let n = samples.len();

    let diffs: Vec<f64> = samples.windows(2).map(|w| w[1] - w[0]).collect();
    let abs_diffs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();

    let mut out = Vec::with_capacity(temporal_layout().len());

    out.push(
        (0..n - 1)
            .map(|i| (samples[i] + samples[i + 1]) / 2.0 * (timestamps[i + 1] - timestamps[i]))
            .sum(),
    );
    out.push((0..n - 1).map(|i| samples[i] * samples[i + 1]).sum());
    out.push({
        let energy: f64 = samples.iter().map(|x| x * x).sum();
        if energy == 0.0 {
            0.0
        } else {
            samples.iter().zip(timestamps).map(|(x, t)| t * x * x).sum::<f64>() / energy
        }
    });
    out.push(diffs.iter().sum::<f64>() / diffs.len() as f64);
    out.push(abs_diffs.iter().sum::<f64>() / abs_diffs.len() as f64);
    out.push(median(&diffs));
    out.push(median(&abs_diffs));
    out.push(turning_points(samples, true));
    out.push(turning_points(samples, false));
    out.push(neighbourhood_peaks(samples));
    out.push(slope(samples, timestamps));
    out.push(abs_diffs.iter().sum());
    out.push(
        (0..n - 1).filter(|&i| samples[i] * samples[i + 1] < 0.0).count() as f64 / (n - 1) as f64,
    );
    Ok(out)
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Strict local extrema: x[i-1] < x[i] > x[i+1] (or both reversed).
fn turning_points(samples: &[f64], positive: bool) -> f64 {
    let mut count = 0.0;
    for i in 1..samples.len() - 1 {
        let up = samples[i - 1] < samples[i] && samples[i] > samples[i + 1];
        let down = samples[i - 1] > samples[i] && samples[i] < samples[i + 1];
        if (positive && up) || (!positive && down) {
            count += 1.0;
        }
    }
    count
}

/// Interior samples strictly greater than every neighbour within
/// [`NEIGHBOURHOOD_RADIUS`]; the first and last samples never qualify.
fn neighbourhood_peaks(samples: &[f64]) -> f64 {
    let n = samples.len();
    let mut count = 0.0;
    for i in 1..n - 1 {
        let lo = i.saturating_sub(NEIGHBOURHOOD_RADIUS);
        let hi = (i + NEIGHBOURHOOD_RADIUS).min(n - 1);
        let peak = (lo..=hi).all(|j| j == i || samples[j] < samples[i]);
        if peak {
            count += 1.0;
        }
    }
    count
}

/// Least-squares slope of value on time.
fn slope(samples: &[f64], timestamps: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let t_mean = timestamps.iter().sum::<f64>() / n;
    let x_mean = samples.iter().sum::<f64>() / n;
    let cov: f64 = timestamps.iter().zip(samples).map(|(t, x)| (t - t_mean) * (x - x_mean)).sum();
    let var: f64 = timestamps.iter().map(|t| (t - t_mean).powi(2)).sum();
    cov / var
}
