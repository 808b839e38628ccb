//! Browser demo: generate a phantom, segment it with any of the three
//! algorithms under adjustable parameters, and score the result.
//!
//! Built with `wasm-pack build --target web crates/wasm` and served from
//! `crates/wasm/www/`.

use hybridseg::pipeline::Algorithm;
use hybridseg::segment::{center_seed, hybrid_segment_detailed, DEFAULT_DELTA_T};
use hybridseg::{
    iterative_threshold, make_phantom, metric_report, preprocess, region_grow, BinaryMask,
    Connectivity, GrayImage, MetricReport, Phantom, PreprocessConfig, RegionGrowParams,
};
use wasm_bindgen::prelude::*;

/// Holds the current phantom, its preprocessed version and the last mask.
#[wasm_bindgen]
pub struct Demo {
    phantom: Phantom,
    raw: GrayImage,
    truth: BinaryMask,
    preprocess: PreprocessConfig,
    prepared: GrayImage,
    mask: BinaryMask,
    final_t: Option<f64>,
    iterations: Option<usize>,
    metrics: MetricReport,
}

fn to_js(e: hybridseg::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "\"n/a\"".to_string(), |v| format!("{v:.6}"))
}

impl Demo {
    pub fn build(seed: u64, noise: f64, hole_radius: f64) -> Result<Demo, hybridseg::Error> {
        let mut phantom = Phantom::with_seed(seed);
        phantom.noise = noise;
        phantom.hole.radius = hole_radius;
        let (raw, truth) = make_phantom(&phantom)?;
        let preprocess_cfg = PreprocessConfig::default();
        let prepared = preprocess(&raw, &preprocess_cfg)?;
        let metrics = metric_report(&truth, &truth)?;
        let mut demo = Demo {
            phantom,
            mask: truth.clone(),
            raw,
            truth,
            preprocess: preprocess_cfg,
            prepared,
            final_t: None,
            iterations: None,
            metrics,
        };
        demo.run(
            Algorithm::Hybrid,
            RegionGrowParams::default(),
            DEFAULT_DELTA_T,
        )?;
        Ok(demo)
    }

    pub fn run(
        &mut self,
        algorithm: Algorithm,
        grow: RegionGrowParams,
        delta_t: f64,
    ) -> Result<(), hybridseg::Error> {
        let img = &self.prepared;
        let (mask, trace) = match algorithm {
            Algorithm::RegionGrowing => (region_grow(img, center_seed(img), &grow)?, None),
            Algorithm::Threshold => {
                let (trace, mask) = iterative_threshold(img, delta_t)?;
                (mask, Some(trace))
            }
            Algorithm::Hybrid => {
                let out = hybrid_segment_detailed(img, &grow, delta_t)?;
                (out.hybrid, Some(out.trace))
            }
        };
        self.metrics = metric_report(&mask, &self.truth)?;
        self.final_t = trace.as_ref().map(|t| t.final_t);
        self.iterations = trace.as_ref().map(|t| t.iterations);
        self.mask = mask;
        Ok(())
    }

    pub fn mask(&self) -> &BinaryMask {
        &self.mask
    }

    pub fn report(&self) -> &MetricReport {
        &self.metrics
    }

    /// Pixels of the hole that the current mask labels as tumor.
    pub fn hole_pixels(&self) -> usize {
        let side = self.phantom.side;
        (0..side)
            .flat_map(|r| (0..side).map(move |c| (r, c)))
            .filter(|&(r, c)| self.phantom.hole.contains(r as f64, c as f64) && self.mask.get(r, c))
            .count()
    }
}

fn gray_rgba(img: &GrayImage) -> Vec<u8> {
    img.to_samples()
        .into_iter()
        .flat_map(|s| [s, s, s, 255])
        .collect()
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(seed: u32, noise: f64, hole_radius: f64) -> Result<Demo, JsValue> {
        Demo::build(u64::from(seed), noise, hole_radius).map_err(to_js)
    }

    pub fn side(&self) -> usize {
        self.phantom.side
    }

    /// Re-runs preprocessing; `swt_levels` 0 disables denoising.
    pub fn set_preprocess(
        &mut self,
        median_window: usize,
        swt_levels: usize,
    ) -> Result<(), JsValue> {
        self.preprocess.median_window = median_window;
        self.preprocess.swt_levels = swt_levels;
        self.prepared = preprocess(&self.raw, &self.preprocess).map_err(to_js)?;
        Ok(())
    }

    /// `algorithm` is `region_growing`, `threshold` or `hybrid`.
    pub fn segment(
        &mut self,
        algorithm: &str,
        tolerance: f64,
        eight_connected: bool,
        delta_t: f64,
    ) -> Result<(), JsValue> {
        let algorithm = Algorithm::from_name(algorithm)
            .ok_or_else(|| JsValue::from_str(&format!("unknown algorithm {algorithm:?}")))?;
        let grow = RegionGrowParams {
            tolerance,
            connectivity: if eight_connected {
                Connectivity::Eight
            } else {
                Connectivity::Four
            },
        };
        self.run(algorithm, grow, delta_t).map_err(to_js)
    }

    pub fn raw_rgba(&self) -> Vec<u8> {
        gray_rgba(&self.raw)
    }

    pub fn prepared_rgba(&self) -> Vec<u8> {
        gray_rgba(&self.prepared)
    }

    /// Preprocessed image with the mask tinted: green = true positive,
    /// red = false positive, blue = missed tumor.
    pub fn overlay_rgba(&self) -> Vec<u8> {
        let gray = self.prepared.to_samples();
        let mut out = Vec::with_capacity(gray.len() * 4);
        for ((&g, &m), &t) in gray.iter().zip(self.mask.bits()).zip(self.truth.bits()) {
            let g = g / 2;
            let px = match (m, t) {
                (true, true) => [g, 200, g, 255],
                (true, false) => [230, g, g, 255],
                (false, true) => [g, g, 230, 255],
                (false, false) => [g, g, g, 255],
            };
            out.extend_from_slice(&px);
        }
        out
    }

    /// Current metrics as a JSON object.
    pub fn metrics_json(&self) -> String {
        let m = &self.metrics;
        format!(
            "{{\"jaccard\":{:.6},\"jaccard_distance\":{:.6},\"dice\":{:.6},\"accuracy\":{:.6},\
             \"precision\":{},\"recall\":{},\"specificity\":{},\"f_measure\":{},\"g_measure\":{},\
             \"final_t\":{},\"iterations\":{},\"hole_pixels\":{}}}",
            m.jaccard,
            m.jaccard_distance,
            m.dice,
            m.accuracy,
            fmt_opt(m.precision),
            fmt_opt(m.recall),
            fmt_opt(m.specificity),
            fmt_opt(m.f_measure),
            fmt_opt(m.g_measure),
            fmt_opt(self.final_t),
            self.iterations
                .map_or("\"n/a\"".to_string(), |n| n.to_string()),
            self.hole_pixels(),
        )
    }
}
