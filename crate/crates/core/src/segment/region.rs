use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(isize, isize)] {
        const FOUR: [(isize, isize); 4] = [(-1, 0), (0, -1), (0, 1), (1, 0)];
        const EIGHT: [(isize, isize); 8] = [
            (-1, -1),
            (-1, 0),
            (-1, 1),
            (0, -1),
            (0, 1),
            (1, -1),
            (1, 0),
            (1, 1),
        ];
        match self {
            Connectivity::Four => &FOUR,
            Connectivity::Eight => &EIGHT,
        }
    }

    /// In-bounds neighbors of `(row, col)` as row-major indices.
    pub fn neighbors(
        self,
        row: usize,
        col: usize,
        width: usize,
        height: usize,
    ) -> impl Iterator<Item = usize> {
        self.offsets().iter().filter_map(move |&(dr, dc)| {
            let r = row.checked_add_signed(dr)?;
            let c = col.checked_add_signed(dc)?;
            (r < height && c < width).then_some(r * width + c)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegionGrowParams {
    /// Largest admissible `|intensity - region mean|`.
    pub tolerance: f64,
    pub connectivity: Connectivity,
}

impl Default for RegionGrowParams {
    fn default() -> Self {
        Self {
            tolerance: 0.1,
            connectivity: Connectivity::Eight,
        }
    }
}

impl RegionGrowParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::invalid("tolerance", "must be a finite value >= 0"));
        }
        Ok(())
    }
}

/// `(floor(height / 2), floor(width / 2))`.
pub fn center_seed(img: &GrayImage) -> Seed {
    Seed::new(img.height() / 2, img.width() / 2)
}

/// Frontier ordered by intensity, then row-major index. Intensities are
/// non-negative, so their IEEE bit patterns sort like the values.
struct Frontier {
    set: BTreeSet<(u64, usize)>,
}

impl Frontier {
    fn insert(&mut self, value: f64, idx: usize) {
        self.set.insert((value.to_bits(), idx));
    }

    fn remove(&mut self, value: f64, idx: usize) {
        self.set.remove(&(value.to_bits(), idx));
    }

    /// Frontier pixel minimizing `|v - mean|`; equal differences go to the
    /// lowest row-major index. Returns `(difference, value, index)`.
    fn nearest(&self, mean: f64) -> Option<(f64, f64, usize)> {
        let pivot = (mean.to_bits(), 0usize);
        let mut best: Option<(f64, f64, usize)> = None;
        let mut consider = |v: f64, idx: usize| -> bool {
            let d = (v - mean).abs();
            match best {
                None => {
                    best = Some((d, v, idx));
                    true
                }
                Some((bd, _, bi)) if d < bd || (d == bd && idx < bi) => {
                    best = Some((d, v, idx));
                    true
                }
                Some((bd, _, _)) => d == bd,
            }
        };

        // walk intensity groups upward from the mean while the difference
        // can still tie the best seen so far
        let mut key = pivot;
        while let Some(&(bits, idx)) = self.set.range(key..).next() {
            if !consider(f64::from_bits(bits), idx) {
                break;
            }
            key = (bits + 1, 0);
        }
        let mut key = pivot;
        while let Some(&(bits, _)) = self.set.range(..key).next_back() {
            // lowest index of this intensity group
            let &(_, idx) = self
                .set
                .range((bits, 0)..)
                .next()
                .expect("group is non-empty");
            if !consider(f64::from_bits(bits), idx) {
                break;
            }
            key = (bits, 0);
        }
        best
    }
}

/// Best-first single-seed region growing.
///
/// The region starts at `seed`. Each step admits the frontier pixel whose
/// intensity is closest to the current region mean, provided that distance is
/// within `params.tolerance`; growth stops at the first pixel that is not.
pub fn region_grow(img: &GrayImage, seed: Seed, params: &RegionGrowParams) -> Result<BinaryMask> {
    params.validate()?;
    let (width, height) = (img.width(), img.height());
    if seed.row >= height || seed.col >= width {
        return Err(Error::SeedOutOfBounds {
            row: seed.row,
            col: seed.col,
            width,
            height,
        });
    }
    let px = img.pixels();

    // 0 = untouched, 1 = frontier, 2 = region
    let mut state = vec![0u8; px.len()];
    let mut frontier = Frontier {
        set: BTreeSet::new(),
    };
    let mut mean = 0.0;
    let mut count = 0usize;

    // running mean, m_k = m_{k-1} + (v - m_{k-1}) / k; stays exact on flat regions
    let mut admit = |idx: usize, state: &mut [u8], frontier: &mut Frontier, mean: &mut f64| {
        state[idx] = 2;
        count += 1;
        *mean += (px[idx] - *mean) / count as f64;
        for n in params
            .connectivity
            .neighbors(idx / width, idx % width, width, height)
        {
            if state[n] == 0 {
                state[n] = 1;
                frontier.insert(px[n], n);
            }
        }
    };

    admit(
        seed.row * width + seed.col,
        &mut state,
        &mut frontier,
        &mut mean,
    );
    while let Some((diff, value, idx)) = frontier.nearest(mean) {
        if diff > params.tolerance {
            break;
        }
        frontier.remove(value, idx);
        admit(idx, &mut state, &mut frontier, &mut mean);
    }

    BinaryMask::new(width, height, state.into_iter().map(|s| s == 2).collect())
}
