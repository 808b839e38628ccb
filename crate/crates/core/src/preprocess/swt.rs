//! Undecimated (à-trous) 2-D Haar transform and wavelet shrinkage.
//!
//! Analysis at level `j` uses the pair `lo = (x[n] + x[n+s]) / 2`,
//! `hi = (x[n] - x[n+s]) / 2` with `s = 2^(j-1)` and periodic extension,
//! applied along columns (x) and then rows (y). With this normalization
//! `lo + hi == x[n]`, so synthesis is the plain sum of every plane.

use crate::raster::GrayImage;

/// The three oriented detail planes of one level.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailPlanes {
    /// High-pass along x, low-pass along y.
    pub horizontal: Vec<f64>,
    /// Low-pass along x, high-pass along y.
    pub vertical: Vec<f64>,
    /// High-pass along both axes.
    pub diagonal: Vec<f64>,
}

impl DetailPlanes {
    pub fn planes(&self) -> [&Vec<f64>; 3] {
        [&self.horizontal, &self.vertical, &self.diagonal]
    }

    pub fn planes_mut(&mut self) -> [&mut Vec<f64>; 3] {
        [&mut self.horizontal, &mut self.vertical, &mut self.diagonal]
    }
}

/// Full-size coefficient planes; `details[0]` is the finest level.
#[derive(Debug, Clone, PartialEq)]
pub struct SwtPyramid {
    pub width: usize,
    pub height: usize,
    pub approx: Vec<f64>,
    pub details: Vec<DetailPlanes>,
}

impl SwtPyramid {
    pub fn levels(&self) -> usize {
        self.details.len()
    }
}

/// One-dimensional analysis along x (`along_x`) or y of a row-major plane.
fn split(
    plane: &[f64],
    width: usize,
    height: usize,
    step: usize,
    along_x: bool,
) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![0.0; plane.len()];
    let mut hi = vec![0.0; plane.len()];
    for row in 0..height {
        for col in 0..width {
            let idx = row * width + col;
            let other = if along_x {
                row * width + (col + step) % width
            } else {
                ((row + step) % height) * width + col
            };
            let (a, b) = (plane[idx], plane[other]);
            lo[idx] = (a + b) / 2.0;
            hi[idx] = (a - b) / 2.0;
        }
    }
    (lo, hi)
}

pub fn swt_decompose(img: &GrayImage, levels: usize) -> SwtPyramid {
    assert!(levels >= 1, "swt_decompose needs at least one level");
    let (width, height) = (img.width(), img.height());
    let mut approx = img.pixels().to_vec();
    let mut details = Vec::with_capacity(levels);
    for level in 0..levels {
        let step = 1usize << level;
        let (lo_x, hi_x) = split(&approx, width, height, step, true);
        let (ll, lh) = split(&lo_x, width, height, step, false);
        let (hl, hh) = split(&hi_x, width, height, step, false);
        details.push(DetailPlanes {
            horizontal: hl,
            vertical: lh,
            diagonal: hh,
        });
        approx = ll;
    }
    SwtPyramid {
        width,
        height,
        approx,
        details,
    }
}

/// Synthesis; no clamping is applied.
pub fn swt_reconstruct(pyr: &SwtPyramid) -> Vec<f64> {
    let mut out = pyr.approx.clone();
    for level in pyr.details.iter().rev() {
        for plane in level.planes() {
            for (o, c) in out.iter_mut().zip(plane) {
                *o += c;
            }
        }
    }
    out
}

fn soft_threshold(c: f64, lambda: f64) -> f64 {
    c.signum() * (c.abs() - lambda).max(0.0)
}

fn median_of(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len().is_multiple_of(2) {
        (values[mid - 1] + values[mid]) / 2.0
    } else {
        values[mid]
    }
}

/// Noise level from the finest diagonal plane: `median(|d|) / 0.6745`.
pub fn estimate_noise_sigma(pyr: &SwtPyramid) -> f64 {
    let mut mags: Vec<f64> = pyr.details[0].diagonal.iter().map(|c| c.abs()).collect();
    median_of(&mut mags) / 0.6745
}

/// VisuShrink: universal soft threshold on every detail coefficient.
pub fn swt_denoise(img: &GrayImage, levels: usize) -> GrayImage {
    let mut pyr = swt_decompose(img, levels);
    let sigma = estimate_noise_sigma(&pyr);
    let lambda = sigma * (2.0 * (img.len() as f64).ln()).sqrt();
    if lambda > 0.0 {
        for level in &mut pyr.details {
            for plane in level.planes_mut() {
                plane
                    .iter_mut()
                    .for_each(|c| *c = soft_threshold(*c, lambda));
            }
        }
    }
    GrayImage::from_plane_clamped(img.width(), img.height(), &swt_reconstruct(&pyr))
}
