//! Synthetic tumor phantom: a bright ellipse containing a dark circular hole
//! on a dark background, with uniform noise. The ground truth is the ellipse
//! minus the hole.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ellipse {
    pub center_row: f64,
    pub center_col: f64,
    /// Semi-axis along columns.
    pub semi_axis_x: f64,
    /// Semi-axis along rows.
    pub semi_axis_y: f64,
    pub intensity: f64,
}

impl Ellipse {
    /// Closed test, `<= 1`.
    pub fn contains(&self, row: f64, col: f64) -> bool {
        self.level(row, col) <= 1.0
    }

    fn level(&self, row: f64, col: f64) -> f64 {
        let dx = (col - self.center_col) / self.semi_axis_x;
        let dy = (row - self.center_row) / self.semi_axis_y;
        dx * dx + dy * dy
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Disk {
    pub center_row: f64,
    pub center_col: f64,
    pub radius: f64,
}

impl Disk {
    /// Open test, `< r^2`, so a zero radius covers no pixel.
    pub fn contains(&self, row: f64, col: f64) -> bool {
        let (dr, dc) = (row - self.center_row, col - self.center_col);
        dr * dr + dc * dc < self.radius * self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Phantom {
    pub side: usize,
    pub tumor: Ellipse,
    /// Filled with the background intensity.
    pub hole: Disk,
    pub background: f64,
    /// Half-width of the uniform noise added to every pixel.
    pub noise: f64,
    pub seed: u64,
}

impl Default for Phantom {
    /// 128x128, 30x20 ellipse at the center, radius-6 hole offset 12 columns
    /// right of center so the center pixel stays on tumor tissue.
    fn default() -> Self {
        Self {
            side: 128,
            tumor: Ellipse {
                center_row: 64.0,
                center_col: 64.0,
                semi_axis_x: 30.0,
                semi_axis_y: 20.0,
                intensity: 0.85,
            },
            hole: Disk {
                center_row: 64.0,
                center_col: 76.0,
                radius: 6.0,
            },
            background: 0.15,
            noise: 0.03,
            seed: 42,
        }
    }
}

impl Phantom {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.side == 0 {
            return Err(Error::invalid("side", "must be positive"));
        }
        let unit = 0.0..=1.0;
        if !unit.contains(&self.tumor.intensity) || !unit.contains(&self.background) {
            return Err(Error::invalid(
                "intensity",
                "tumor and background must lie in [0, 1]",
            ));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::invalid("noise", "must be a finite value >= 0"));
        }
        if !(self.tumor.semi_axis_x > 0.0 && self.tumor.semi_axis_y > 0.0) {
            return Err(Error::invalid("tumor", "semi-axes must be positive"));
        }
        if self.hole.radius.is_nan() || self.hole.radius < 0.0 {
            return Err(Error::invalid("hole", "radius must be >= 0"));
        }
        if !self.hole_inside_tumor() {
            return Err(Error::invalid(
                "hole",
                "must lie strictly inside the tumor ellipse",
            ));
        }
        Ok(())
    }

    /// Samples the hole boundary; every point must sit strictly inside the ellipse.
    fn hole_inside_tumor(&self) -> bool {
        let h = &self.hole;
        (0..720).all(|k| {
            let theta = k as f64 * std::f64::consts::PI / 360.0;
            let row = h.center_row + h.radius * theta.sin();
            let col = h.center_col + h.radius * theta.cos();
            self.tumor.level(row, col) < 1.0
        })
    }

    pub fn is_tumor(&self, row: usize, col: usize) -> bool {
        let (r, c) = (row as f64, col as f64);
        self.tumor.contains(r, c) && !self.hole.contains(r, c)
    }
}

/// Deterministic in `p.seed`; noise is drawn in row-major order.
pub fn make_phantom(p: &Phantom) -> Result<(GrayImage, BinaryMask)> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let image = GrayImage::from_fn(p.side, p.side, |row, col| {
        let base = if p.is_tumor(row, col) {
            p.tumor.intensity
        } else {
            p.background
        };
        let jitter = if p.noise > 0.0 {
            rng.random_range(-p.noise..=p.noise)
        } else {
            0.0
        };
        base + jitter
    });
    let truth = BinaryMask::from_fn(p.side, p.side, |row, col| p.is_tumor(row, col));
    Ok((image, truth))
}
