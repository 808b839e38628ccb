//! Enhancement chain run before segmentation: percentile contrast stretch,
//! median filtering, then stationary-wavelet denoising.

mod swt;

use serde::{Deserialize, Serialize};

pub use swt::{
    estimate_noise_sigma, swt_decompose, swt_denoise, swt_reconstruct, DetailPlanes, SwtPyramid,
};

use crate::error::{Error, Result};
use crate::raster::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PreprocessConfig {
    pub stretch_low_pct: f64,
    pub stretch_high_pct: f64,
    pub median_window: usize,
    /// Zero disables wavelet denoising.
    pub swt_levels: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            stretch_low_pct: 1.0,
            stretch_high_pct: 99.0,
            median_window: 3,
            swt_levels: 1,
        }
    }
}

impl PreprocessConfig {
    /// Identity chain: full-range stretch, 1x1 median, no denoising.
    pub fn passthrough() -> Self {
        Self {
            stretch_low_pct: 0.0,
            stretch_high_pct: 100.0,
            median_window: 1,
            swt_levels: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..50.0).contains(&self.stretch_low_pct) {
            return Err(Error::invalid("stretch_low_pct", "must lie in [0, 50)"));
        }
        if !(self.stretch_high_pct > 50.0 && self.stretch_high_pct <= 100.0) {
            return Err(Error::invalid("stretch_high_pct", "must lie in (50, 100]"));
        }
        if self.median_window.is_multiple_of(2) {
            return Err(Error::invalid(
                "median_window",
                "must be odd and at least 1",
            ));
        }
        Ok(())
    }
}

/// Linear-interpolated percentile of an already sorted slice.
fn percentile_sorted(sorted: &[f64], pct: f64) -> f64 {
    let rank = pct / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Maps the `[low_pct, high_pct]` percentile range linearly onto `[0, 1]`,
/// clamping outside it. A flat range leaves the image unchanged.
pub fn contrast_stretch(img: &GrayImage, low_pct: f64, high_pct: f64) -> GrayImage {
    let mut sorted = img.pixels().to_vec();
    sorted.sort_by(f64::total_cmp);
    let lo = percentile_sorted(&sorted, low_pct);
    let hi = percentile_sorted(&sorted, high_pct);
    if hi <= lo {
        return img.clone();
    }
    let span = hi - lo;
    let plane: Vec<f64> = img.pixels().iter().map(|&v| (v - lo) / span).collect();
    GrayImage::from_plane_clamped(img.width(), img.height(), &plane)
}

/// `window x window` median with edge replication.
pub fn median_filter(img: &GrayImage, window: usize) -> GrayImage {
    assert!(window % 2 == 1, "median window must be odd");
    if window == 1 {
        return img.clone();
    }
    let (w, h) = (img.width() as isize, img.height() as isize);
    let half = (window / 2) as isize;
    let mut buf = Vec::with_capacity(window * window);
    GrayImage::from_fn(img.width(), img.height(), |row, col| {
        buf.clear();
        for dr in -half..=half {
            let r = (row as isize + dr).clamp(0, h - 1) as usize;
            for dc in -half..=half {
                let c = (col as isize + dc).clamp(0, w - 1) as usize;
                buf.push(img.get(r, c));
            }
        }
        let mid = buf.len() / 2;
        *buf.select_nth_unstable_by(mid, f64::total_cmp).1
    })
}

/// Stretch, then median, then wavelet denoising when `swt_levels > 0`.
pub fn preprocess(img: &GrayImage, cfg: &PreprocessConfig) -> Result<GrayImage> {
    cfg.validate()?;
    let stretched = contrast_stretch(img, cfg.stretch_low_pct, cfg.stretch_high_pct);
    let filtered = median_filter(&stretched, cfg.median_window);
    Ok(if cfg.swt_levels > 0 {
        swt_denoise(&filtered, cfg.swt_levels)
    } else {
        filtered
    })
}
