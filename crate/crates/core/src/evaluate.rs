//! Agreement between an observed mask and a ground-truth mask.
//!
//! Precision, recall and the measures built from them have no value when their
//! denominator is zero; they are `None` here and render as `n/a` in reports.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::raster::BinaryMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

pub fn confusion(observed: &BinaryMask, truth: &BinaryMask) -> Result<ConfusionCounts> {
    observed.check_same_shape(truth)?;
    let mut c = ConfusionCounts::default();
    for (&o, &t) in observed.bits().iter().zip(truth.bits()) {
        match (o, t) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

/// `sum(min(x_i, y_i)) / sum(max(x_i, y_i))` for non-negative vectors; 1 when both are all zero.
pub fn weighted_jaccard(x: &[f64], y: &[f64]) -> f64 {
    let (num, den) = x
        .iter()
        .zip(y)
        .fold((0.0, 0.0), |(n, d), (&a, &b)| (n + a.min(b), d + a.max(b)));
    if den == 0.0 {
        1.0
    } else {
        num / den
    }
}

fn jaccard_from_counts(c: &ConfusionCounts) -> f64 {
    // min(x, y) on bits is tp, max(x, y) is tp + fp + fn
    let union = c.tp + c.fp + c.fn_;
    if union == 0 {
        1.0
    } else {
        c.tp as f64 / union as f64
    }
}

fn dice_from_counts(c: &ConfusionCounts) -> f64 {
    let den = 2 * c.tp + c.fp + c.fn_;
    if den == 0 {
        1.0
    } else {
        (2 * c.tp) as f64 / den as f64
    }
}

pub fn jaccard(observed: &BinaryMask, truth: &BinaryMask) -> Result<f64> {
    confusion(observed, truth).map(|c| jaccard_from_counts(&c))
}

pub fn jaccard_distance(observed: &BinaryMask, truth: &BinaryMask) -> Result<f64> {
    jaccard(observed, truth).map(|j| 1.0 - j)
}

/// `2|A ∩ G| / (|A| + |G|)`; 1 when both masks are empty.
pub fn dice(observed: &BinaryMask, truth: &BinaryMask) -> Result<f64> {
    confusion(observed, truth).map(|c| dice_from_counts(&c))
}

pub fn accuracy(c: &ConfusionCounts) -> Result<f64> {
    match c.total() {
        0 => Err(Error::UndefinedMetric),
        n => Ok((c.tp + c.tn) as f64 / n as f64),
    }
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn precision(c: &ConfusionCounts) -> Option<f64> {
    ratio(c.tp, c.tp + c.fp)
}

/// Also reported as sensitivity.
pub fn recall(c: &ConfusionCounts) -> Option<f64> {
    ratio(c.tp, c.tp + c.fn_)
}

pub fn specificity(c: &ConfusionCounts) -> Option<f64> {
    ratio(c.tn, c.tn + c.fp)
}

/// Harmonic mean of precision and recall.
pub fn f_measure(precision: Option<f64>, recall: Option<f64>) -> Option<f64> {
    let (p, r) = (precision?, recall?);
    (p + r > 0.0).then(|| 2.0 * p * r / (p + r))
}

/// Geometric mean of precision and recall.
pub fn g_measure(precision: Option<f64>, recall: Option<f64>) -> Option<f64> {
    Some((precision? * recall?).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricReport {
    pub counts: ConfusionCounts,
    pub jaccard: f64,
    pub jaccard_distance: f64,
    pub dice: f64,
    pub accuracy: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub specificity: Option<f64>,
    pub f_measure: Option<f64>,
    pub g_measure: Option<f64>,
}

impl MetricReport {
    pub fn from_counts(counts: ConfusionCounts) -> Result<Self> {
        let jaccard = jaccard_from_counts(&counts);
        let precision = precision(&counts);
        let recall = recall(&counts);
        Ok(Self {
            counts,
            jaccard,
            jaccard_distance: 1.0 - jaccard,
            dice: dice_from_counts(&counts),
            accuracy: accuracy(&counts)?,
            precision,
            recall,
            specificity: specificity(&counts),
            f_measure: f_measure(precision, recall),
            g_measure: g_measure(precision, recall),
        })
    }

    /// Same as `recall`.
    pub fn sensitivity(&self) -> Option<f64> {
        self.recall
    }
}

/// Every metric from a single confusion pass.
pub fn metric_report(observed: &BinaryMask, truth: &BinaryMask) -> Result<MetricReport> {
    MetricReport::from_counts(confusion(observed, truth)?)
}
