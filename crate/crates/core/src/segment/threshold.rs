use serde::Serialize;

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage};

/// Hard cap on threshold updates; reaching it is reported, not an error.
pub const MAX_THRESHOLD_ITERATIONS: usize = 1000;

/// One update: the threshold in force and the two class means it produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdStep {
    pub t: f64,
    /// Mean of pixels strictly above `t`.
    pub m1: f64,
    /// Mean of pixels at or below `t`.
    pub m2: f64,
}

impl ThresholdStep {
    pub fn next_t(&self) -> f64 {
        (self.m1 + self.m2) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// `|T - T_new| <= delta_t`.
    Converged,
    /// One of the two classes was empty; `T` kept as is.
    EmptyClass,
    IterationCap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdTrace {
    pub final_t: f64,
    pub iterations: usize,
    pub history: Vec<ThresholdStep>,
    pub stop: StopReason,
}

/// `1` where intensity is strictly above `t`.
pub fn apply_threshold(img: &GrayImage, t: f64) -> BinaryMask {
    BinaryMask::new(
        img.width(),
        img.height(),
        img.pixels().iter().map(|&v| v > t).collect(),
    )
    .expect("image dimensions are valid")
}

/// Compensated (Neumaier) sum.
fn accurate_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn class_means(px: &[f64], t: f64) -> Option<(f64, f64)> {
    let bright = px.iter().filter(|&&v| v > t).count();
    let dark = px.len() - bright;
    if bright == 0 || dark == 0 {
        return None;
    }
    let m1 = accurate_sum(px.iter().copied().filter(|&v| v > t)) / bright as f64;
    let m2 = accurate_sum(px.iter().copied().filter(|&v| v <= t)) / dark as f64;
    Some((m1, m2))
}

/// Iterative global threshold starting from the image mean.
///
/// Repeats `T <- (mean(v > T) + mean(v <= T)) / 2` until the update moves `T`
/// by at most `delta_t`, a class empties, or the iteration cap is hit.
pub fn iterative_threshold(img: &GrayImage, delta_t: f64) -> Result<(ThresholdTrace, BinaryMask)> {
    if !(delta_t > 0.0 && delta_t.is_finite()) {
        return Err(Error::invalid("delta_t", "must be a finite value > 0"));
    }
    let px = img.pixels();
    let mut t = accurate_sum(px.iter().copied()) / px.len() as f64;
    let mut history = Vec::new();
    let mut stop = StopReason::IterationCap;

    while history.len() < MAX_THRESHOLD_ITERATIONS {
        let Some((m1, m2)) = class_means(px, t) else {
            stop = StopReason::EmptyClass;
            break;
        };
        let step = ThresholdStep { t, m1, m2 };
        history.push(step);
        let t_new = step.next_t();
        let moved = (t - t_new).abs();
        t = t_new;
        if moved <= delta_t {
            stop = StopReason::Converged;
            break;
        }
    }

    let trace = ThresholdTrace {
        final_t: t,
        iterations: history.len(),
        history,
        stop,
    };
    let mask = apply_threshold(img, t);
    Ok((trace, mask))
}
