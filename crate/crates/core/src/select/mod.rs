//! One-way ANOVA feature scoring, significance filtering, and ranked
//! selection of raw channels and extracted feature columns.

mod beta;

pub use beta::{betainc, f_survival, ln_gamma};

use thiserror::Error;

use crate::ingest::FrameStream;

#[derive(Debug, Error)]
pub enum SelectError {
    #[error("{values} values but {labels} class labels")]
    ShapeMismatch { values: usize, labels: usize },
    #[error("need at least two classes with samples, found {found}")]
    NotEnoughClasses { found: usize },
    #[error("{samples} samples across {classes} classes leaves no within-group freedom")]
    NotEnoughSamples { samples: usize, classes: usize },
    #[error("class id {id} out of range for {classes} classes")]
    ClassIdOutOfRange { id: usize, classes: usize },
    #[error("no feature passed the significance filter")]
    NoSurvivors,
    #[error("top-{requested} requested but only {finite} finite scores are available")]
    TopNOutOfRange { requested: usize, finite: usize },
    #[error("channel budget must be at least 1")]
    TopKZero,
}

#[derive(Clone, Copy, Debug)]
pub struct AnovaResult {
    pub f: f64,
    pub p: f64,
}

/// One-way ANOVA F test of a column against class membership.
///
/// Classes with no samples are ignored. A column whose group means all
/// coincide scores (0, 1); a column with distinct group means and zero
/// within-group variance scores (inf, 0).
pub fn anova_f(values: &[f64], class_ids: &[usize], n_classes: usize) -> Result<AnovaResult, SelectError> {
    if values.len() != class_ids.len() {
        return Err(SelectError::ShapeMismatch { values: values.len(), labels: class_ids.len() });
    }
    let mut counts = vec![0usize; n_classes];
    let mut sums = vec![0.0f64; n_classes];
    for (&v, &c) in values.iter().zip(class_ids) {
        if c >= n_classes {
            return Err(SelectError::ClassIdOutOfRange { id: c, classes: n_classes });
        }
        counts[c] += 1;
        sums[c] += v;
    }
    let k = counts.iter().filter(|&&n| n > 0).count();
    if k < 2 {
        return Err(SelectError::NotEnoughClasses { found: k });
    }
    let n = values.len();
    if n <= k {
        return Err(SelectError::NotEnoughSamples { samples: n, classes: k });
    }

    let grand_mean = values.iter().sum::<f64>() / n as f64;
    let mut ss_between = 0.0;
    for c in 0..n_classes {
        if counts[c] > 0 {
            let group_mean = sums[c] / counts[c] as f64;
            ss_between += counts[c] as f64 * (group_mean - grand_mean).powi(2);
        }
    }
    let mut ss_within = 0.0;
    for (&v, &c) in values.iter().zip(class_ids) {
        let group_mean = sums[c] / counts[c] as f64;
        ss_within += (v - group_mean).powi(2);
    }

    if ss_between == 0.0 {
        return Ok(AnovaResult { f: 0.0, p: 1.0 });
    }
    if ss_within == 0.0 {
        return Ok(AnovaResult { f: f64::INFINITY, p: 0.0 });
    }
    let d1 = (k - 1) as f64;
    let d2 = (n - k) as f64;
    let f = (ss_between / d1) / (ss_within / d2);
    Ok(AnovaResult { f, p: f_survival(f, d1, d2) })
}

/// A named score, before filtering.
#[derive(Clone, Debug)]
pub struct Scored {
    pub stable_name: String,
    pub f: f64,
    pub p: f64,
}

/// A named score that survived the filter, with its 1-based rank.
#[derive(Clone, Debug)]
pub struct Ranked {
    pub rank: usize,
    pub stable_name: String,
    pub f: f64,
    pub p: f64,
}

/// Drops scores with p above `alpha` (p equal to alpha survives), then
/// ranks the rest by descending F with name as the tie-break. Infinite F
/// sorts ahead of every finite score.
pub fn rank_and_filter(scores: &[Scored], alpha: f64) -> Result<Vec<Ranked>, SelectError> {
    let mut survivors: Vec<&Scored> = scores.iter().filter(|s| s.p <= alpha).collect();
    if survivors.is_empty() {
        return Err(SelectError::NoSurvivors);
    }
    survivors.sort_by(|a, b| b.f.total_cmp(&a.f).then_with(|| a.stable_name.cmp(&b.stable_name)));
    Ok(survivors
        .into_iter()
        .enumerate()
        .map(|(i, s)| Ranked { rank: i + 1, stable_name: s.stable_name.clone(), f: s.f, p: s.p })
        .collect())
}

#[derive(Clone, Copy, Debug)]
pub struct TopNMean {
    pub mean: f64,
    /// Infinite scores outrank every finite one but are excluded from the
    /// mean; this records how many were passed over.
    pub infinite_skipped: usize,
}

/// Mean F over the best `n` finite scores of an already-ranked list.
pub fn mean_top_n(ranked: &[Ranked], n: usize) -> Result<TopNMean, SelectError> {
    let finite: Vec<f64> = ranked.iter().map(|r| r.f).filter(|f| f.is_finite()).collect();
    if n == 0 || n > finite.len() {
        return Err(SelectError::TopNOutOfRange { requested: n, finite: finite.len() });
    }
    let infinite_skipped = ranked.len() - finite.len();
    Ok(TopNMean { mean: finite[..n].iter().sum::<f64>() / n as f64, infinite_skipped })
}

/// One raw channel's ANOVA standing.
#[derive(Clone, Debug)]
pub struct ChannelScore {
    pub rank: usize,
    pub stable_name: String,
    pub f: f64,
    pub p: f64,
    pub selected: bool,
}

#[derive(Clone, Debug)]
pub struct ChannelSelection {
    /// Every channel, ranked 1..C by descending F (ties by name), whether
    /// significant or not.
    pub ranking: Vec<ChannelScore>,
    /// Significant channels in rank order, capped at the budget.
    pub selected: Vec<String>,
    /// True when fewer significant channels exist than the budget allows.
    pub shortfall: bool,
}

/// Scores every channel on per-frame values against gesture labels, then
/// keeps the `top_k` best among those with p at or below `alpha`.
pub fn select_raw_channels(stream: &FrameStream, top_k: usize, alpha: f64) -> Result<ChannelSelection, SelectError> {
    if top_k == 0 {
        return Err(SelectError::TopKZero);
    }
    let classes = stream.present_labels();
    let class_ids: Vec<usize> = stream
        .frames
        .iter()
        .map(|f| classes.iter().position(|c| *c == f.label).expect("label present"))
        .collect();

    let mut scored = Vec::with_capacity(stream.channels.len());
    let mut values = Vec::with_capacity(stream.frames.len());
    for (ch, descriptor) in stream.channels.iter().enumerate() {
        values.clear();
        values.extend(stream.frames.iter().map(|f| f.values[ch]));
        let result = anova_f(&values, &class_ids, classes.len())?;
        scored.push(Scored { stable_name: descriptor.stable_name.clone(), f: result.f, p: result.p });
    }
    scored.sort_by(|a, b| b.f.total_cmp(&a.f).then_with(|| a.stable_name.cmp(&b.stable_name)));

    let mut selected = Vec::new();
    let mut ranking = Vec::with_capacity(scored.len());
    for (i, s) in scored.iter().enumerate() {
        let take = s.p <= alpha && selected.len() < top_k;
        if take {
            selected.push(s.stable_name.clone());
        }
        ranking.push(ChannelScore { rank: i + 1, stable_name: s.stable_name.clone(), f: s.f, p: s.p, selected: take });
    }
    let survivors = scored.iter().filter(|s| s.p <= alpha).count();
    Ok(ChannelSelection { ranking, selected, shortfall: survivors < top_k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_frames;
    use approx::assert_relative_eq;
    use std::io::Cursor;

    #[test]
    fn two_group_anchor_values() {
        let values = [1.0, 2.0, 2.0, 3.0];
        let ids = [0, 0, 1, 1];
        let r = anova_f(&values, &ids, 2).unwrap();
        assert_relative_eq!(r.f, 2.0, max_relative = 1e-12);
        assert_relative_eq!(r.p, 1.0 - 1.0 / 2.0f64.sqrt(), epsilon = 1e-7);
    }

    #[test]
    fn equal_group_means_score_zero() {
        let values = [1.0, 3.0, 2.0, 2.0];
        let ids = [0, 0, 1, 1];
        let r = anova_f(&values, &ids, 2).unwrap();
        assert_eq!(r.f, 0.0);
        assert_eq!(r.p, 1.0);
    }

    #[test]
    fn perfect_separation_scores_infinite() {
        let values = [1.0, 1.0, 5.0, 5.0];
        let ids = [0, 0, 1, 1];
        let r = anova_f(&values, &ids, 2).unwrap();
        assert!(r.f.is_infinite());
        assert_eq!(r.p, 0.0);
    }

    #[test]
    fn empty_classes_are_ignored() {
        let values = [1.0, 2.0, 2.0, 3.0];
        let ids = [0, 0, 3, 3];
        let r = anova_f(&values, &ids, 5).unwrap();
        assert_relative_eq!(r.f, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(matches!(anova_f(&[1.0, 2.0], &[0], 1), Err(SelectError::ShapeMismatch { .. })));
        assert!(matches!(anova_f(&[1.0, 2.0], &[0, 0], 1), Err(SelectError::NotEnoughClasses { found: 1 })));
        assert!(matches!(anova_f(&[1.0, 2.0], &[0, 1], 2), Err(SelectError::NotEnoughSamples { .. })));
        assert!(matches!(anova_f(&[1.0, 2.0], &[0, 7], 2), Err(SelectError::ClassIdOutOfRange { id: 7, .. })));
    }

    #[test]
    fn f_is_invariant_under_affine_maps() {
        let values = [0.3, 1.9, -0.5, 2.2, 0.0, 1.1];
        let ids = [0, 1, 0, 1, 2, 2];
        let base = anova_f(&values, &ids, 3).unwrap();
        let mapped: Vec<f64> = values.iter().map(|v| -3.5 * v + 11.0).collect();
        let r = anova_f(&mapped, &ids, 3).unwrap();
        assert_relative_eq!(r.f, base.f, max_relative = 1e-9);
        assert_relative_eq!(r.p, base.p, max_relative = 1e-9);
    }

    fn scored(name: &str, f: f64, p: f64) -> Scored {
        Scored { stable_name: name.to_string(), f, p }
    }

    #[test]
    fn ranking_orders_by_f_with_name_tiebreak() {
        let scores = vec![
            scored("c", 5.0, 0.01),
            scored("b", f64::INFINITY, 0.0),
            scored("a", 5.0, 0.01),
            scored("d", 9.0, 0.001),
            scored("e", 1.0, 0.5),
        ];
        let ranked = rank_and_filter(&scores, 0.05).unwrap();
        let names: Vec<&str> = ranked.iter().map(|r| r.stable_name.as_str()).collect();
        assert_eq!(names, vec!["b", "d", "a", "c"]);
        assert_eq!(ranked[0].rank, 1);
        assert_eq!(ranked[3].rank, 4);
    }

    #[test]
    fn filter_keeps_boundary_p() {
        let scores = vec![scored("x", 3.0, 0.05), scored("y", 4.0, 0.050000001)];
        let ranked = rank_and_filter(&scores, 0.05).unwrap();
        assert_eq!(ranked.len(), 1);
        assert_eq!(ranked[0].stable_name, "x");
    }

    #[test]
    fn all_filtered_is_an_error() {
        let scores = vec![scored("x", 0.1, 0.9)];
        assert!(matches!(rank_and_filter(&scores, 0.05), Err(SelectError::NoSurvivors)));
    }

    #[test]
    fn top_n_mean_skips_infinities_and_never_increases() {
        let scores = vec![
            scored("a", f64::INFINITY, 0.0),
            scored("b", 10.0, 0.001),
            scored("c", 4.0, 0.01),
            scored("d", 1.0, 0.04),
        ];
        let ranked = rank_and_filter(&scores, 0.05).unwrap();
        let m1 = mean_top_n(&ranked, 1).unwrap();
        assert_eq!(m1.mean, 10.0);
        assert_eq!(m1.infinite_skipped, 1);
        let m2 = mean_top_n(&ranked, 2).unwrap();
        assert_eq!(m2.mean, 7.0);
        let m3 = mean_top_n(&ranked, 3).unwrap();
        assert_relative_eq!(m3.mean, 5.0);
        assert!(m1.mean >= m2.mean && m2.mean >= m3.mean);
        assert!(matches!(mean_top_n(&ranked, 4), Err(SelectError::TopNOutOfRange { requested: 4, finite: 3 })));
        assert!(matches!(mean_top_n(&ranked, 0), Err(SelectError::TopNOutOfRange { .. })));
    }

    fn channel_stream() -> FrameStream {
        // discriminative: tracks the class. flat: same everywhere.
        // noisy: class means equal, values vary within class.
        let csv = "\
recording_id,label,right_palm_position_x,right_palm_position_y,right_palm_position_z
a,HELLO,1.0,7.0,1.0
a,HELLO,1.1,7.0,3.0
b,HELLO,0.9,7.0,2.0
c,GOOD,5.0,7.0,3.0
c,GOOD,5.1,7.0,1.0
d,GOOD,4.9,7.0,2.0
";
        parse_frames(Cursor::new(csv)).unwrap()
    }

    #[test]
    fn channel_selection_ranks_all_and_selects_significant() {
        let stream = channel_stream();
        let sel = select_raw_channels(&stream, 2, 0.05).unwrap();
        assert_eq!(sel.ranking.len(), 3);
        assert_eq!(sel.ranking[0].stable_name, "right_palm_position_x");
        assert!(sel.ranking[0].selected);
        assert_eq!(sel.selected, vec!["right_palm_position_x".to_string()]);
        assert!(sel.shortfall);
        // flat and noisy channels rank behind but still appear
        assert!(sel.ranking.iter().any(|c| c.stable_name == "right_palm_position_y" && !c.selected));
        for (i, score) in sel.ranking.iter().enumerate() {
            assert_eq!(score.rank, i + 1);
        }
    }

    #[test]
    fn channel_budget_caps_selection() {
        let stream = channel_stream();
        let sel = select_raw_channels(&stream, 1, 1.0).unwrap();
        // alpha = 1 keeps everything, the budget takes only the best
        assert_eq!(sel.selected.len(), 1);
        assert!(!sel.shortfall);
        assert!(matches!(select_raw_channels(&stream, 0, 0.05), Err(SelectError::TopKZero)));
    }
}
