//! Synthetic hand-tracking stream generator with known ground truth.
//!
//! Two profiles share a frame/channel layout and differ in how class
//! information is planted:
//!
//! * `Standard`: every informative channel carries class-coded sinusoid
//!   parameters; the remaining channels replay one class-independent
//!   waveform of the frame index, so their per-frame class means are flat
//!   and a one-way ANOVA reliably dismisses them.
//! * `Complementary`: the class id is factored into (u, v). The u factor
//!   is written into the value *spread* of the S channel group behind a
//!   shared random level shift, so order-free distribution features read
//!   it cleanly while curve-shape features see it through a confounder.
//!   The v factor is written purely into the frame *ordering* of the T
//!   channel group; every ordering is a permutation of one multiset, so
//!   distribution features are blind to v by construction. Classifiers
//!   fed both feature families should beat either family alone.

use std::f64::consts::TAU;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::ExperimentError;
use crate::ingest::{
    Axis, BodyPart, ChannelDescriptor, FrameRecord, FrameStream, Measurement, Side,
    FRAME_PERIOD_SECONDS, GESTURE_VOCABULARY,
};
use crate::seed::{substream, Domain};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SynthProfile {
    Standard,
    Complementary,
}

impl SynthProfile {
    pub fn as_str(self) -> &'static str {
        match self {
            SynthProfile::Standard => "standard",
            SynthProfile::Complementary => "complementary",
        }
    }
}

impl FromStr for SynthProfile {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(SynthProfile::Standard),
            "complementary" => Ok(SynthProfile::Complementary),
            other => Err(ExperimentError::UnknownProfile { name: other.to_string() }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub classes: usize,
    pub recordings_per_class: usize,
    pub frames_per_recording: usize,
    pub channels: usize,
    /// Fraction of channels that carry class information; the rest are
    /// class-independent distractors. Rounded to the nearest channel.
    pub informative_fraction: f64,
    pub noise: f64,
    pub profile: SynthProfile,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            classes: 18,
            recordings_per_class: 183,
            frames_per_recording: 3,
            channels: 54,
            informative_fraction: 0.926,
            noise: 0.05,
            profile: SynthProfile::Standard,
            seed: 1,
        }
    }
}

/// Ground truth about which channels carry class signal.
#[derive(Clone, Debug)]
pub struct SynthInfo {
    pub informative: Vec<String>,
    pub uninformative: Vec<String>,
}

fn catalog_base(side: Side) -> Vec<ChannelDescriptor> {
    use Axis::{Scalar, X, Y, Z};
    let mut out = Vec::with_capacity(33);
    let triple = |part, measurement| {
        [X, Y, Z].map(|axis| ChannelDescriptor::new(side, part, None, measurement, axis))
    };
    out.extend(triple(BodyPart::Arm, Measurement::StartPosition));
    out.extend(triple(BodyPart::Arm, Measurement::EndPosition));
    out.extend(triple(BodyPart::Palm, Measurement::Position));
    out.extend(triple(BodyPart::Palm, Measurement::Velocity));
    out.extend(triple(BodyPart::Palm, Measurement::Normal));
    for m in [Measurement::Pitch, Measurement::Yaw, Measurement::Roll] {
        out.push(ChannelDescriptor::new(side, BodyPart::Palm, None, m, Scalar));
    }
    out.extend(triple(BodyPart::Wrist, Measurement::Position));
    out.extend(triple(BodyPart::Elbow, Measurement::Position));
    out.extend(triple(BodyPart::Finger, Measurement::Direction));
    out.extend(triple(BodyPart::Finger, Measurement::Velocity));
    out.extend(triple(BodyPart::Finger, Measurement::Position));
    out
}

/// First `n` channels of the fixed catalog: the right side, then the
/// left, then numbered finger joints on both sides.
pub fn channel_catalog(n: usize) -> Result<Vec<ChannelDescriptor>, ExperimentError> {
    let mut all = catalog_base(Side::Right);
    all.extend(catalog_base(Side::Left));
    let mut joint = 1;
    while all.len() < n {
        if joint > 99 {
            return Err(ExperimentError::Config {
                reason: format!("channel catalog cannot supply {n} channels"),
            });
        }
        for side in [Side::Right, Side::Left] {
            for axis in [Axis::X, Axis::Y, Axis::Z] {
                all.push(ChannelDescriptor::new(
                    side,
                    BodyPart::FingerJoint,
                    Some(&joint.to_string()),
                    Measurement::Position,
                    axis,
                ));
            }
        }
        joint += 1;
    }
    all.truncate(n);
    Ok(all)
}

fn is_position_like(c: &ChannelDescriptor) -> bool {
    matches!(
        c.measurement,
        Measurement::Position | Measurement::StartPosition | Measurement::EndPosition
    )
}

fn validate(config: &SynthConfig) -> Result<(), ExperimentError> {
    let fail = |reason: String| Err(ExperimentError::Config { reason });
    if config.classes == 0 || config.classes > GESTURE_VOCABULARY.len() {
        return fail(format!("classes must be 1..={}, got {}", GESTURE_VOCABULARY.len(), config.classes));
    }
    if config.recordings_per_class == 0 {
        return fail("recordings_per_class must be at least 1".into());
    }
    if config.frames_per_recording < 2 {
        return fail("frames_per_recording must be at least 2".into());
    }
    if config.profile == SynthProfile::Complementary && config.frames_per_recording != 3 {
        return fail("the complementary profile encodes 3-frame patterns; frames_per_recording must be 3".into());
    }
    if config.channels == 0 {
        return fail("channels must be at least 1".into());
    }
    if !(0.0..=1.0).contains(&config.informative_fraction) {
        return fail(format!("informative_fraction must be in [0, 1], got {}", config.informative_fraction));
    }
    if !(config.noise >= 0.0) {
        return fail(format!("noise must be non-negative, got {}", config.noise));
    }
    Ok(())
}

/// Class factor layout for the complementary profile: class = v * u_levels + u.
fn complementary_levels(classes: usize) -> (usize, usize) {
    let v_levels = classes.min(3);
    let u_levels = classes.div_ceil(v_levels);
    (u_levels, v_levels)
}

/// Frame orderings of the multiset {-1, 0, 1}, one per v level.
const V_PATTERNS: [[f64; 3]; 3] = [[-1.0, 0.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]];

struct StandardParams {
    /// (offset, per-class [base, amplitude, frequency, drift]).
    informative: Vec<(f64, Vec<[f64; 4]>)>,
    /// (offset, base, amplitude, frequency, phase).
    distractor: Vec<[f64; 5]>,
}

fn draw_standard_params(
    catalog: &[ChannelDescriptor],
    n_inf: usize,
    classes: usize,
    rng: &mut ChaCha8Rng,
) -> StandardParams {
    let mut informative = Vec::with_capacity(n_inf);
    let mut distractor = Vec::with_capacity(catalog.len() - n_inf);
    for (c, descriptor) in catalog.iter().enumerate() {
        let offset = if is_position_like(descriptor) { rng.gen_range(50.0..150.0) } else { 0.0 };
        if c < n_inf {
            let per_class = (0..classes)
                .map(|_| {
                    [
                        rng.gen_range(-2.0..2.0),
                        rng.gen_range(0.5..1.5),
                        rng.gen_range(0.3..2.0),
                        rng.gen_range(-1.0..1.0),
                    ]
                })
                .collect();
            informative.push((offset, per_class));
        } else {
            distractor.push([
                offset,
                rng.gen_range(-2.0..2.0),
                rng.gen_range(0.5..1.5),
                rng.gen_range(0.3..2.0),
                rng.gen_range(0.0..TAU),
            ]);
        }
    }
    StandardParams { informative, distractor }
}

/// Zero-mean, unit-population-variance shape over 3 frames. The rejection
/// loop discards nearly-flat draws; it consumes a data-independent rng
/// prefix, so generation stays reproducible.
fn draw_shape(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let g: [f64; 3] =
            [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let mean = (g[0] + g[1] + g[2]) / 3.0;
        let mut o = g.map(|x| x - mean);
        let var = (o[0] * o[0] + o[1] * o[1] + o[2] * o[2]) / 3.0;
        if var >= 0.0025 {
            let scale = var.sqrt();
            o.iter_mut().for_each(|x| *x /= scale);
            return o;
        }
    }
}

/// Generates a frame stream plus the ground-truth channel split.
///
/// All randomness flows from one substream in a fixed order: channel
/// parameters first (channel-major), then recordings in class-major order
/// with per-recording latent draws followed by frame-major noise.
pub fn generate_synth(config: &SynthConfig) -> Result<(FrameStream, SynthInfo), ExperimentError> {
    validate(config)?;
    let catalog = channel_catalog(config.channels)?;
    let n_inf = ((config.channels as f64 * config.informative_fraction).round() as usize).min(config.channels);
    let mut rng = substream(config.seed, Domain::Synth, 0);

    let info = SynthInfo {
        informative: catalog[..n_inf].iter().map(|c| c.stable_name.clone()).collect(),
        uninformative: catalog[n_inf..].iter().map(|c| c.stable_name.clone()).collect(),
    };

    let frames = match config.profile {
        SynthProfile::Standard => standard_frames(config, &catalog, n_inf, &mut rng),
        SynthProfile::Complementary => complementary_frames(config, &catalog, n_inf, &mut rng),
    };

    Ok((FrameStream { channels: catalog, frames }, info))
}

fn standard_frames(
    config: &SynthConfig,
    catalog: &[ChannelDescriptor],
    n_inf: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<FrameRecord> {
    let params = draw_standard_params(catalog, n_inf, config.classes, rng);
    let mut frames = Vec::with_capacity(config.classes * config.recordings_per_class * config.frames_per_recording);
    let mut phases = vec![0.0; n_inf];
    for class in 0..config.classes {
        let label = GESTURE_VOCABULARY[class];
        for rec in 0..config.recordings_per_class {
            for phase in phases.iter_mut() {
                *phase = rng.gen_range(0.0..TAU);
            }
            for j in 0..config.frames_per_recording {
                let t = j as f64 * FRAME_PERIOD_SECONDS;
                let mut values = Vec::with_capacity(catalog.len());
                for c in 0..catalog.len() {
                    let noise = config.noise * rng.gen_range(-1.0..1.0);
                    let value = if c < n_inf {
                        let (offset, per_class) = &params.informative[c];
                        let [base, amplitude, frequency, drift] = per_class[class];
                        offset + base + amplitude * (TAU * frequency * t + phases[c]).sin() + drift * t + noise
                    } else {
                        let [offset, base, amplitude, frequency, phase] = params.distractor[c - n_inf];
                        offset + base + amplitude * (TAU * frequency * t + phase).sin() + noise
                    };
                    values.push(value);
                }
                frames.push(FrameRecord {
                    recording_id: format!("{label}_{rec}"),
                    frame_index: j,
                    timestamp: t,
                    label: label.to_string(),
                    values,
                });
            }
        }
    }
    frames
}

// Complementary profile constants. The S group's spread step must keep
// every value positive: 25 - 8 - 9 * sqrt(2) > 0.
const S_BASE: f64 = 25.0;
const S_MEAN_STEP: f64 = 0.6;
const S_SPREAD_BASE: f64 = 4.0;
const S_SPREAD_STEP: f64 = 1.0;
const T_BASE: f64 = 25.0;
const T_MEAN_STEP: f64 = 0.7;
const SHIFT_RANGE: f64 = 8.0;

fn complementary_frames(
    config: &SynthConfig,
    catalog: &[ChannelDescriptor],
    n_inf: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<FrameRecord> {
    let (u_levels, _) = complementary_levels(config.classes);
    let n_s = n_inf / 2;

    // parameter block: informative scales, then distractor waveforms
    let scales: Vec<f64> = (0..n_inf).map(|_| rng.gen_range(0.8..1.25)).collect();
    let distractor: Vec<[f64; 4]> = (n_inf..catalog.len())
        .map(|_| {
            [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(0.5..1.5),
                rng.gen_range(0.3..2.0),
                rng.gen_range(0.0..TAU),
            ]
        })
        .collect();

    let mut frames = Vec::with_capacity(config.classes * config.recordings_per_class * config.frames_per_recording);
    for class in 0..config.classes {
        let label = GESTURE_VOCABULARY[class];
        let u = (class % u_levels) as f64;
        let v = class / u_levels;
        let spread = S_SPREAD_BASE + S_SPREAD_STEP * u;
        for rec in 0..config.recordings_per_class {
            // latents shared across every channel of the recording: a
            // level shift and value shape for S, a level shift for T
            let s_shift = rng.gen_range(-SHIFT_RANGE..SHIFT_RANGE);
            let shape = draw_shape(rng);
            let t_shift = rng.gen_range(-SHIFT_RANGE..SHIFT_RANGE);
            for j in 0..config.frames_per_recording {
                let t = j as f64 * FRAME_PERIOD_SECONDS;
                let mut values = Vec::with_capacity(catalog.len());
                for c in 0..catalog.len() {
                    let noise = config.noise * rng.gen_range(-1.0..1.0);
                    let value = if c < n_s {
                        (S_BASE + S_MEAN_STEP * u + s_shift + spread * shape[j]) * scales[c] + noise
                    } else if c < n_inf {
                        (T_BASE + T_MEAN_STEP * u + t_shift + V_PATTERNS[v][j]) * scales[c] + noise
                    } else {
                        let [base, amplitude, frequency, phase] = distractor[c - n_inf];
                        base + amplitude * (TAU * frequency * t + phase).sin() + noise
                    };
                    values.push(value);
                }
                frames.push(FrameRecord {
                    recording_id: format!("{label}_{rec}"),
                    frame_index: j,
                    timestamp: t,
                    label: label.to_string(),
                    values,
                });
            }
        }
    }
    frames
}
