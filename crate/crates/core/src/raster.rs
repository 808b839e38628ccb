//! Grayscale images, binary masks and their file formats.
//!
//! Intensities are normalized reals in `[0, 1]`; an 8-bit sample `s` maps to
//! `s / 255`. Readers accept PGM (P2 and P5, maxval 255) and 8-bit grayscale
//! or RGB PNG. Masks are written as P5 PGM or grayscale PNG with 0/255 samples.

use std::fs;
use std::io::BufWriter;
use std::path::Path;

use crate::error::{Error, Result};

/// Row-major grid of intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(
                "dimensions",
                "width and height must be positive",
            ));
        }
        if pixels.len() != width * height {
            return Err(Error::invalid(
                "pixels",
                format!("expected {} values, got {}", width * height, pixels.len()),
            ));
        }
        if let Some(v) = pixels.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::invalid(
                "pixels",
                format!("intensity {v} outside [0, 1]"),
            ));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(row, col)` and clamping into `[0, 1]`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut pixels = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                pixels.push(clamp_unit(f(row, col)));
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Self {
        Self::from_fn(width, height, |_, _| value)
    }

    /// Interprets 8-bit samples as `s / 255`.
    pub fn from_samples(width: usize, height: usize, samples: &[u8]) -> Result<Self> {
        Self::new(
            width,
            height,
            samples.iter().map(|&s| sample_to_unit(s)).collect(),
        )
    }

    /// Clamps arbitrary reals into `[0, 1]`. Used at stage boundaries.
    pub(crate) fn from_plane_clamped(width: usize, height: usize, plane: &[f64]) -> Self {
        debug_assert_eq!(plane.len(), width * height);
        Self {
            width,
            height,
            pixels: plane.iter().map(|&v| clamp_unit(v)).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    /// Nearest 8-bit sample for each pixel.
    pub fn to_samples(&self) -> Vec<u8> {
        self.pixels.iter().map(|&v| unit_to_sample(v)).collect()
    }
}

/// Row-major grid of `{0, 1}` values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(
                "dimensions",
                "width and height must be positive",
            ));
        }
        if bits.len() != width * height {
            return Err(Error::invalid(
                "bits",
                format!("expected {} values, got {}", width * height, bits.len()),
            ));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::filled(width, height, false)
    }

    pub fn ones(width: usize, height: usize) -> Self {
        Self::filled(width, height, true)
    }

    fn filled(width: usize, height: usize, value: bool) -> Self {
        assert!(width > 0 && height > 0, "mask dimensions must be positive");
        Self {
            width,
            height,
            bits: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(width > 0 && height > 0, "mask dimensions must be positive");
        let mut bits = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                bits.push(f(row, col));
            }
        }
        Self {
            width,
            height,
            bits,
        }
    }

    /// Ground-truth decoding: a sample of 128 or more is foreground.
    pub fn from_image(img: &GrayImage) -> Self {
        Self {
            width: img.width,
            height: img.height,
            bits: img.to_samples().into_iter().map(|s| s >= 128).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub(crate) fn check_same_shape(&self, other: &BinaryMask) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::Shape {
                expected: self.dims(),
                found: other.dims(),
            });
        }
        Ok(())
    }

    /// Pixelwise product of two masks.
    pub fn and(&self, other: &BinaryMask) -> Result<BinaryMask> {
        self.check_same_shape(other)?;
        Ok(Self {
            width: self.width,
            height: self.height,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a && b)
                .collect(),
        })
    }

    /// True when every set pixel of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.dims() == other.dims() && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn to_samples(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect()
    }
}

/// A pixel position: `row` indexes height, `col` indexes width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed {
    pub row: usize,
    pub col: usize,
}

impl Seed {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// ITU-R BT.601 luma. Integer weights keep equal channels exact.
pub fn rgb_to_gray(r: f64, g: f64, b: f64) -> f64 {
    clamp_unit((299.0 * r + 587.0 * g + 114.0 * b) / 1000.0)
}

pub(crate) fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

fn sample_to_unit(s: u8) -> f64 {
    f64::from(s) / 255.0
}

fn unit_to_sample(v: f64) -> u8 {
    (clamp_unit(v) * 255.0).round() as u8
}

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', b'\r', b'\n', 0x1a, b'\n'];

/// Reads a PGM (P2/P5) or 8-bit PNG file. RGB PNGs are converted with [`rgb_to_gray`].
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_image(&bytes)
}

/// Reads an image and binarizes it with the 128 ground-truth cut.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    load_image(path).map(|img| BinaryMask::from_image(&img))
}

pub fn decode_image(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.starts_with(&PNG_SIGNATURE) {
        decode_png(bytes)
    } else if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        decode_pgm(bytes)
    } else {
        Err(Error::format(
            "image",
            "unrecognized file signature (expected PGM or PNG)",
        ))
    }
}

/// Writes `0 -> 0`, `1 -> 255`. A `.png` extension selects PNG, anything else P5 PGM.
pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    write_samples(mask.width, mask.height, &mask.to_samples(), path.as_ref())
}

/// Writes the image quantized to 8 bits.
pub fn save_image(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    write_samples(img.width, img.height, &img.to_samples(), path.as_ref())
}

fn write_samples(width: usize, height: usize, samples: &[u8], path: &Path) -> Result<()> {
    let is_png = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("png"));
    let bytes = if is_png {
        encode_png(width, height, samples)?
    } else {
        encode_pgm(width, height, samples)
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn encode_pgm(width: usize, height: usize, samples: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(samples);
    out
}

fn encode_png(width: usize, height: usize, samples: &[u8]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(BufWriter::new(&mut out), width as u32, height as u32);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| Error::format("PNG", e.to_string()))?;
        writer
            .write_image_data(samples)
            .map_err(|e| Error::format("PNG", e.to_string()))?;
    }
    Ok(out)
}

fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    let mut reader = decoder
        .read_info()
        .map_err(|e| Error::format("PNG", e.to_string()))?;
    let (color, depth) = reader.output_color_type();
    if depth != png::BitDepth::Eight {
        return Err(Error::format(
            "PNG",
            format!("unsupported bit depth {depth:?}"),
        ));
    }
    let channels = match color {
        png::ColorType::Grayscale => 1,
        png::ColorType::Rgb => 3,
        other => {
            return Err(Error::format(
                "PNG",
                format!("unsupported color type {other:?}"),
            ))
        }
    };
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::format("PNG", "image too large"))?;
    let mut buf = vec![0u8; size];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::format("PNG", e.to_string()))?;
    let (width, height) = (info.width as usize, info.height as usize);
    let mut pixels = Vec::with_capacity(width * height);
    for row in buf[..info.buffer_size()].chunks(info.line_size) {
        for px in row[..width * channels].chunks(channels) {
            pixels.push(match *px {
                [g] => sample_to_unit(g),
                [r, g, b] => rgb_to_gray(sample_to_unit(r), sample_to_unit(g), sample_to_unit(b)),
                _ => unreachable!(),
            });
        }
    }
    GrayImage::new(width, height, pixels)
}

/// Netpbm header tokenizer: whitespace-separated tokens, `#` comments to end of line.
struct PgmHeader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PgmHeader<'a> {
    fn next_token(&mut self) -> Result<&'a [u8]> {
        loop {
            match self.bytes.get(self.pos) {
                Some(b'#') => {
                    while self.bytes.get(self.pos).is_some_and(|&b| b != b'\n') {
                        self.pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(_) => break,
                None => return Err(Error::format("PGM", "truncated header")),
            }
        }
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn next_usize(&mut self, what: &str) -> Result<usize> {
        let tok = self.next_token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                Error::format(
                    "PGM",
                    format!("invalid {what}: {:?}", String::from_utf8_lossy(tok)),
                )
            })
    }
}

fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let binary = bytes.starts_with(b"P5");
    let mut header = PgmHeader { bytes, pos: 2 };
    let width = header.next_usize("width")?;
    let height = header.next_usize("height")?;
    let maxval = header.next_usize("maxval")?;
    if maxval != 255 {
        return Err(Error::format(
            "PGM",
            format!("unsupported maxval {maxval} (only 255)"),
        ));
    }
    if width == 0 || height == 0 {
        return Err(Error::format("PGM", "zero dimension"));
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| Error::format("PGM", "dimensions overflow"))?;

    let samples = if binary {
        // exactly one whitespace byte separates maxval from the raster
        let start = header.pos + 1;
        match bytes.get(start..start + n) {
            Some(raster) if bytes.get(header.pos).is_some_and(u8::is_ascii_whitespace) => {
                raster.to_vec()
            }
            _ => return Err(Error::format("PGM", "truncated raster")),
        }
    } else {
        let mut samples = Vec::with_capacity(n);
        for _ in 0..n {
            let s = header.next_usize("sample")?;
            if s > 255 {
                return Err(Error::format("PGM", format!("sample {s} exceeds maxval")));
            }
            samples.push(s as u8);
        }
        samples
    };
    GrayImage::from_samples(width, height, &samples)
}
