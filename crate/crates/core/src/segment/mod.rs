//! The three segmenters: center-seeded region growing, iterative global
//! thresholding, and their pixelwise product.

mod region;
mod threshold;

pub use region::{center_seed, region_grow, Connectivity, RegionGrowParams};
pub use threshold::{
    apply_threshold, iterative_threshold, StopReason, ThresholdStep, ThresholdTrace,
    MAX_THRESHOLD_ITERATIONS,
};

use crate::error::Result;
use crate::raster::{BinaryMask, GrayImage};

/// Every intermediate of a hybrid run.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridOutput {
    pub region: BinaryMask,
    pub threshold: BinaryMask,
    pub trace: ThresholdTrace,
    pub hybrid: BinaryMask,
}

pub fn hybrid_segment_detailed(
    img: &GrayImage,
    params: &RegionGrowParams,
    delta_t: f64,
) -> Result<HybridOutput> {
    let region = region_grow(img, center_seed(img), params)?;
    let (trace, threshold) = iterative_threshold(img, delta_t)?;
    let hybrid = region.and(&threshold)?;
    Ok(HybridOutput {
        region,
        threshold,
        trace,
        hybrid,
    })
}

/// Region growing from the center pixel AND the iterative-threshold mask.
pub fn hybrid_segment(
    img: &GrayImage,
    params: &RegionGrowParams,
    delta_t: f64,
) -> Result<BinaryMask> {
    hybrid_segment_detailed(img, params, delta_t).map(|out| out.hybrid)
}

/// Default convergence tolerance: one 8-bit gray level.
pub const DEFAULT_DELTA_T: f64 = 1.0 / 255.0;
