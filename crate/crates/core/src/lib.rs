//! Hybrid region-growing / iterative-threshold segmentation for grayscale images.
//!
//! The crate is split along the processing chain:
//!
//! - [`raster`]: image and mask types plus PGM/PNG I/O
//! - [`preprocess`]: contrast stretch, median filter and stationary wavelet denoising
//! - [`segment`]: center-seeded region growing, iterative global thresholding and
//!   their pixelwise product
//! - [`evaluate`]: confusion counts and overlap/accuracy metrics against a ground truth
//! - [`phantom`]: synthetic tumor-with-hole test images
//! - [`pipeline`]: batch configuration, execution and CSV/JSON reports

pub mod error;
pub mod evaluate;
pub mod phantom;
pub mod pipeline;
pub mod preprocess;
pub mod raster;
pub mod segment;

pub use error::{Error, Result};
pub use evaluate::{metric_report, ConfusionCounts, MetricReport};
pub use phantom::{make_phantom, Phantom};
pub use preprocess::{preprocess, PreprocessConfig};
pub use raster::{BinaryMask, GrayImage, Seed};
pub use segment::{
    hybrid_segment, iterative_threshold, region_grow, Connectivity, RegionGrowParams,
    ThresholdTrace,
};
