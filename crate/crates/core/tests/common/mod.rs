//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the code paths it is used to check.

#![allow(dead_code)]

use hybridseg::{BinaryMask, GrayImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_mask(rng: &mut ChaCha8Rng, width: usize, height: usize, density: f64) -> BinaryMask {
    BinaryMask::from_fn(width, height, |_, _| rng.random_bool(density))
}

/// 8-bit quantized image drawn from a small palette so ties are common.
pub fn random_palette_image(rng: &mut ChaCha8Rng, width: usize, height: usize) -> GrayImage {
    let levels = rng.random_range(2..=8);
    let palette: Vec<u8> = (0..levels).map(|_| rng.random()).collect();
    GrayImage::from_fn(width, height, |_, _| {
        f64::from(palette[rng.random_range(0..levels)]) / 255.0
    })
}

pub fn random_8bit_image(rng: &mut ChaCha8Rng, width: usize, height: usize) -> GrayImage {
    GrayImage::from_fn(width, height, |_, _| f64::from(rng.random::<u8>()) / 255.0)
}

/// A few bright rectangles and disks on a dark noisy field.
pub fn random_scene(rng: &mut ChaCha8Rng, side: usize) -> GrayImage {
    let bg: f64 = rng.random_range(0.0..0.4);
    let blobs: Vec<(f64, f64, f64, f64)> = (0..rng.random_range(1..4))
        .map(|_| {
            (
                rng.random_range(0.0..side as f64),
                rng.random_range(0.0..side as f64),
                rng.random_range(2.0..side as f64 / 3.0),
                rng.random_range(0.5..1.0),
            )
        })
        .collect();
    let noise: f64 = rng.random_range(0.0..0.1);
    GrayImage::from_fn(side, side, |r, c| {
        let mut v = bg;
        for &(br, bc, rad, level) in &blobs {
            if (r as f64 - br).powi(2) + (c as f64 - bc).powi(2) < rad * rad {
                v = level;
            }
        }
        v + rng.random_range(-noise..=noise)
    })
}

/// Every metric recomputed from raw pixel loops. Undefined values are `None`.
#[derive(Debug)]
pub struct OracleMetrics {
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

pub fn oracle_metrics(observed: &BinaryMask, truth: &BinaryMask) -> OracleMetrics {
    let (mut sum_min, mut sum_max) = (0u64, 0u64);
    let (mut both, mut obs, mut tru, mut agree, mut neg_truth, mut true_neg) =
        (0u64, 0u64, 0u64, 0u64, 0u64, 0u64);
    for row in 0..truth.height() {
        for col in 0..truth.width() {
            let x = observed.get(row, col) as u64;
            let y = truth.get(row, col) as u64;
            sum_min += x.min(y);
            sum_max += x.max(y);
            both += x * y;
            obs += x;
            tru += y;
            agree += (x == y) as u64;
            neg_truth += 1 - y;
            true_neg += (1 - x) * (1 - y);
        }
    }
    let n = (truth.width() * truth.height()) as f64;
    let jaccard = if sum_max == 0 {
        1.0
    } else {
        sum_min as f64 / sum_max as f64
    };
    let dice = if obs + tru == 0 {
        1.0
    } else {
        2.0 * both as f64 / (obs + tru) as f64
    };
    let precision = (obs > 0).then(|| both as f64 / obs as f64);
    let recall = (tru > 0).then(|| both as f64 / tru as f64);
    let specificity = (neg_truth > 0).then(|| true_neg as f64 / neg_truth as f64);
    let f_measure = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    let g_measure = match (precision, recall) {
        (Some(p), Some(r)) => Some((p * r).sqrt()),
        _ => None,
    };
    OracleMetrics {
        jaccard,
        jaccard_distance: 1.0 - jaccard,
        dice,
        accuracy: agree as f64 / n,
        precision,
        recall,
        specificity,
        f_measure,
        g_measure,
    }
}

fn neighbor_offsets(eight: bool) -> Vec<(isize, isize)> {
    let mut out = Vec::new();
    for dr in -1isize..=1 {
        for dc in -1isize..=1 {
            if (dr, dc) == (0, 0) || (!eight && dr != 0 && dc != 0) {
                continue;
            }
            out.push((dr, dc));
        }
    }
    out
}

/// Best-first growth that rescans the whole frontier every step and
/// recomputes the region mean from the admitted pixels (in admission order,
/// with the same running-mean recurrence the library documents).
pub fn oracle_region_grow(
    img: &GrayImage,
    seed: (usize, usize),
    tolerance: f64,
    eight: bool,
) -> BinaryMask {
    let (w, h) = (img.width(), img.height());
    let mut in_region = vec![false; w * h];
    let mut in_frontier = vec![false; w * h];
    let mut admitted: Vec<usize> = Vec::new();
    let mut frontier: Vec<usize> = Vec::new();
    let offsets = neighbor_offsets(eight);

    let admit = |idx: usize,
                 in_region: &mut Vec<bool>,
                 in_frontier: &mut Vec<bool>,
                 frontier: &mut Vec<usize>,
                 admitted: &mut Vec<usize>| {
        in_region[idx] = true;
        admitted.push(idx);
        let (r, c) = ((idx / w) as isize, (idx % w) as isize);
        for &(dr, dc) in &offsets {
            let (nr, nc) = (r + dr, c + dc);
            if nr < 0 || nc < 0 || nr >= h as isize || nc >= w as isize {
                continue;
            }
            let n = nr as usize * w + nc as usize;
            if !in_region[n] && !in_frontier[n] {
                in_frontier[n] = true;
                frontier.push(n);
            }
        }
    };

    admit(
        seed.0 * w + seed.1,
        &mut in_region,
        &mut in_frontier,
        &mut frontier,
        &mut admitted,
    );
    loop {
        let mut mean = 0.0;
        for (k, &idx) in admitted.iter().enumerate() {
            mean += (img.pixels()[idx] - mean) / (k + 1) as f64;
        }
        let mut best: Option<(f64, usize)> = None;
        for &idx in &frontier {
            let d = (img.pixels()[idx] - mean).abs();
            best = match best {
                Some((bd, bi)) if bd < d || (bd == d && bi < idx) => Some((bd, bi)),
                _ => Some((d, idx)),
            };
        }
        let Some((d, idx)) = best else { break };
        if d > tolerance {
            break;
        }
        frontier.retain(|&f| f != idx);
        in_frontier[idx] = false;
        admit(
            idx,
            &mut in_region,
            &mut in_frontier,
            &mut frontier,
            &mut admitted,
        );
    }
    BinaryMask::new(w, h, in_region).unwrap()
}

/// Per-pixel logical AND.
pub fn oracle_and(a: &BinaryMask, b: &BinaryMask) -> BinaryMask {
    BinaryMask::from_fn(a.width(), a.height(), |r, c| a.get(r, c) && b.get(r, c))
}

/// True when every set pixel is reachable from `seed` through set pixels.
pub fn is_connected_from(mask: &BinaryMask, seed: (usize, usize), eight: bool) -> bool {
    let (w, h) = mask.dims();
    if !mask.get(seed.0, seed.1) {
        return false;
    }
    let mut seen = vec![false; w * h];
    let mut stack = vec![seed];
    seen[seed.0 * w + seed.1] = true;
    let mut reached = 0;
    while let Some((r, c)) = stack.pop() {
        reached += 1;
        for (dr, dc) in neighbor_offsets(eight) {
            let (nr, nc) = (r as isize + dr, c as isize + dc);
            if nr < 0 || nc < 0 || nr >= h as isize || nc >= w as isize {
                continue;
            }
            let (nr, nc) = (nr as usize, nc as usize);
            if mask.get(nr, nc) && !seen[nr * w + nc] {
                seen[nr * w + nc] = true;
                stack.push((nr, nc));
            }
        }
    }
    reached == mask.count_ones()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn close_opt(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => close(a, b, tol),
        (None, None) => true,
        _ => false,
    }
}
