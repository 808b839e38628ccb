use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Instant;

use serde::Serialize;

use super::config::{Algorithm, Case, CaseSource, RunConfig};
use super::report::emit_report;
use crate::error::{Error, Result};
use crate::evaluate::{metric_report, MetricReport};
use crate::phantom::{make_phantom, Phantom};
use crate::preprocess::preprocess;
use crate::raster::{load_image, load_mask, save_mask, BinaryMask, GrayImage};
use crate::segment::{
    center_seed, hybrid_segment_detailed, iterative_threshold, region_grow, ThresholdTrace,
};

/// One report row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub label: String,
    pub algorithm: Algorithm,
    /// Present for `threshold` and `hybrid`.
    pub trace: Option<ThresholdTrace>,
    pub metrics: MetricReport,
    /// Segmentation time only; preprocessing is shared across algorithms.
    pub wall_time_s: f64,
}

#[derive(Debug)]
pub struct CaseFailure {
    pub label: String,
    pub error: Error,
}

#[derive(Debug)]
pub struct RunSummary {
    pub results: Vec<CaseResult>,
    pub failures: Vec<CaseFailure>,
    /// `None` when every case failed.
    pub report_path: Option<PathBuf>,
    pub mask_paths: Vec<PathBuf>,
}

/// Runs one algorithm on an already preprocessed image.
pub fn segment_with(
    algorithm: Algorithm,
    img: &GrayImage,
    cfg: &RunConfig,
) -> Result<(BinaryMask, Option<ThresholdTrace>)> {
    Ok(match algorithm {
        Algorithm::RegionGrowing => (region_grow(img, center_seed(img), &cfg.grow)?, None),
        Algorithm::Threshold => {
            let (trace, mask) = iterative_threshold(img, cfg.delta_t)?;
            (mask, Some(trace))
        }
        Algorithm::Hybrid => {
            let out = hybrid_segment_detailed(img, &cfg.grow, cfg.delta_t)?;
            (out.hybrid, Some(out.trace))
        }
    })
}

fn load_case(case: &Case) -> Result<(GrayImage, BinaryMask)> {
    let (img, truth) = match &case.source {
        CaseSource::Files { image, truth } => (load_image(image)?, load_mask(truth)?),
        CaseSource::Phantom { seed } => make_phantom(&Phantom::with_seed(*seed))?,
    };
    if (img.width(), img.height()) != truth.dims() {
        return Err(Error::Shape {
            expected: (img.width(), img.height()),
            found: truth.dims(),
        });
    }
    Ok((img, truth))
}

struct CaseOutput {
    results: Vec<CaseResult>,
    mask_paths: Vec<PathBuf>,
}

fn run_case(cfg: &RunConfig, case: &Case) -> Result<CaseOutput> {
    let (img, truth) = load_case(case)?;
    let img = preprocess(&img, &cfg.preprocess)?;
    let mut out = CaseOutput {
        results: Vec::with_capacity(cfg.algorithms.len()),
        mask_paths: Vec::new(),
    };
    for &algorithm in &cfg.algorithms {
        let start = Instant::now();
        let (mask, trace) = segment_with(algorithm, &img, cfg)?;
        let wall_time_s = start.elapsed().as_secs_f64();
        let metrics = metric_report(&mask, &truth)?;
        if cfg.emit_masks {
            let path = cfg
                .output_dir
                .join(format!("{}_{}.pgm", case.label, algorithm.name()));
            save_mask(&mask, &path)?;
            out.mask_paths.push(path);
        }
        out.results.push(CaseResult {
            label: case.label.clone(),
            algorithm,
            trace,
            metrics,
            wall_time_s,
        });
    }
    Ok(out)
}

/// Report file name inside `output_dir`.
pub fn report_file_name(cfg: &RunConfig) -> String {
    format!("report.{}", cfg.report_format.extension())
}

pub const ERROR_LOG: &str = "errors.log";

/// Processes every case, writes masks and the report into `cfg.output_dir`.
///
/// Cases run on worker threads; rows are ordered by case, then by the
/// configured algorithm order. A failing case is logged to `errors.log` and
/// skipped.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;

    let slots: Vec<Mutex<Option<Result<CaseOutput>>>> =
        cfg.cases.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(cfg.cases.len());
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(case) = cfg.cases.get(i) else { break };
                let outcome = run_case(cfg, case);
                *slots[i].lock().expect("slot lock") = Some(outcome);
            });
        }
    });

    let mut summary = RunSummary {
        results: Vec::new(),
        failures: Vec::new(),
        report_path: None,
        mask_paths: Vec::new(),
    };
    for (case, slot) in cfg.cases.iter().zip(slots) {
        match slot
            .into_inner()
            .expect("slot lock")
            .expect("every case ran")
        {
            Ok(out) => {
                summary.results.extend(out.results);
                summary.mask_paths.extend(out.mask_paths);
            }
            Err(error) => summary.failures.push(CaseFailure {
                label: case.label.clone(),
                error,
            }),
        }
    }

    let log_path = cfg.output_dir.join(ERROR_LOG);
    if summary.failures.is_empty() {
        let _ = fs::remove_file(&log_path);
    } else {
        let log: String = summary
            .failures
            .iter()
            .map(|f| format!("{}: {}\n", f.label, f.error))
            .collect();
        fs::write(&log_path, log).map_err(|e| Error::io(&log_path, e))?;
    }

    if !summary.results.is_empty() {
        let path = cfg.output_dir.join(report_file_name(cfg));
        emit_report(&summary.results, cfg.report_format, &path)?;
        summary.report_path = Some(path);
    }
    Ok(summary)
}
