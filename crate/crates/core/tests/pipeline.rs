use std::fs;
use std::path::Path;

use hybridseg::pipeline::{
    parse_config, run_pipeline, Algorithm, Case, CaseSource, ReportFormat, RunConfig, ERROR_LOG,
};
use hybridseg::raster::{load_mask, save_image, save_mask};
use hybridseg::segment::{hybrid_segment, DEFAULT_DELTA_T};
use hybridseg::{make_phantom, preprocess, Phantom, PreprocessConfig, RegionGrowParams};

fn phantom_case(label: &str, seed: u64) -> Case {
    Case {
        label: label.into(),
        source: CaseSource::Phantom { seed },
    }
}

fn write_phantom_files(dir: &Path, stem: &str, seed: u64) -> Case {
    let (img, truth) = make_phantom(&Phantom::with_seed(seed)).unwrap();
    let image = dir.join(format!("{stem}.pgm"));
    let truth_path = dir.join(format!("{stem}_truth.png"));
    save_image(&img, &image).unwrap();
    save_mask(&truth, &truth_path).unwrap();
    Case {
        label: stem.into(),
        source: CaseSource::Files {
            image,
            truth: truth_path,
        },
    }
}

#[test]
fn one_case_three_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let case = write_phantom_files(dir.path(), "p1", 5);
    let mut cfg = RunConfig::new(vec![case], dir.path().join("out"));
    cfg.emit_masks = true;
    let summary = run_pipeline(&cfg).unwrap();
    assert!(summary.failures.is_empty());
    assert_eq!(summary.results.len(), 3);
    let algs: Vec<Algorithm> = summary.results.iter().map(|r| r.algorithm).collect();
    assert_eq!(algs, Algorithm::ALL.to_vec());
    assert!(summary.results[0].trace.is_none());
    assert!(summary.results[1].trace.is_some());

    let report = summary.report_path.unwrap();
    assert_eq!(report.file_name().unwrap(), "report.csv");
    assert_eq!(fs::read_to_string(&report).unwrap().lines().count(), 4);

    assert_eq!(summary.mask_paths.len(), 3);
    for alg in Algorithm::ALL {
        assert!(dir
            .path()
            .join(format!("out/p1_{}.pgm", alg.name()))
            .exists());
    }
}

#[test]
fn emitted_masks_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(vec![phantom_case("ph", 9)], dir.path());
    cfg.emit_masks = true;
    cfg.algorithms = vec![Algorithm::Hybrid];
    run_pipeline(&cfg).unwrap();

    let (img, _) = make_phantom(&Phantom::with_seed(9)).unwrap();
    let pre = preprocess(&img, &PreprocessConfig::default()).unwrap();
    let expected = hybrid_segment(&pre, &RegionGrowParams::default(), DEFAULT_DELTA_T).unwrap();
    assert_eq!(
        load_mask(dir.path().join("ph_hybrid.pgm")).unwrap(),
        expected
    );
}

#[test]
fn perfect_truth_scores_one() {
    let dir = tempfile::tempdir().unwrap();
    let (img, _) = make_phantom(&Phantom::with_seed(3)).unwrap();
    save_image(&img, dir.path().join("img.pgm")).unwrap();

    // truth = hybrid output on the 8-bit image the pipeline will actually read
    let reloaded = hybridseg::raster::load_image(dir.path().join("img.pgm")).unwrap();
    let pre = preprocess(&reloaded, &PreprocessConfig::default()).unwrap();
    let hybrid = hybrid_segment(&pre, &RegionGrowParams::default(), DEFAULT_DELTA_T).unwrap();
    save_mask(&hybrid, dir.path().join("truth.pgm")).unwrap();

    let mut cfg = RunConfig::new(
        vec![Case {
            label: "exact".into(),
            source: CaseSource::Files {
                image: dir.path().join("img.pgm"),
                truth: dir.path().join("truth.pgm"),
            },
        }],
        dir.path(),
    );
    cfg.algorithms = vec![Algorithm::Hybrid];
    let summary = run_pipeline(&cfg).unwrap();
    let m = &summary.results[0].metrics;
    assert_eq!(m.dice, 1.0);
    assert_eq!(m.jaccard_distance, 0.0);
}

#[test]
fn failing_case_is_logged_and_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_phantom_files(dir.path(), "good", 1);
    fs::write(dir.path().join("broken.pgm"), b"P5\n10 10\n255\n\x00").unwrap();
    let broken = Case {
        label: "broken".into(),
        source: CaseSource::Files {
            image: dir.path().join("broken.pgm"),
            truth: dir.path().join("good_truth.png"),
        },
    };
    let small = Case {
        label: "mismatch".into(),
        source: CaseSource::Files {
            image: dir.path().join("tiny.pgm"),
            truth: dir.path().join("good_truth.png"),
        },
    };
    save_image(
        &hybridseg::GrayImage::constant(4, 4, 0.5),
        dir.path().join("tiny.pgm"),
    )
    .unwrap();

    let cfg = RunConfig::new(vec![broken, good, small], dir.path().join("out"));
    let summary = run_pipeline(&cfg).unwrap();
    assert_eq!(summary.results.len(), 3);
    assert!(summary.results.iter().all(|r| r.label == "good"));
    let failed: Vec<&str> = summary.failures.iter().map(|f| f.label.as_str()).collect();
    assert_eq!(failed, ["broken", "mismatch"]);
    let log = fs::read_to_string(dir.path().join("out").join(ERROR_LOG)).unwrap();
    assert!(log.contains("broken: PGM"));
    assert!(log.contains("mismatch: shape mismatch"));
}

#[test]
fn rows_follow_case_then_algorithm_order() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(vec![phantom_case("b", 2), phantom_case("a", 1)], dir.path());
    cfg.algorithms = vec![
        Algorithm::Hybrid,
        Algorithm::RegionGrowing,
        Algorithm::Threshold,
    ];
    let summary = run_pipeline(&cfg).unwrap();
    let order: Vec<(String, Algorithm)> = summary
        .results
        .iter()
        .map(|r| (r.label.clone(), r.algorithm))
        .collect();
    let mut expected = Vec::new();
    for label in ["b", "a"] {
        for alg in &cfg.algorithms {
            expected.push((label.to_string(), *alg));
        }
    }
    assert_eq!(order, expected);
    let csv = fs::read_to_string(summary.report_path.unwrap()).unwrap();
    let labels: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(labels, ["b", "b", "b", "a", "a", "a"]);
}

#[test]
fn json_report_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    write_phantom_files(dir.path(), "f", 11);
    let config = dir.path().join("run.toml");
    fs::write(
        &config,
        r#"
output_dir = "results"
report_format = "json"
algorithms = ["threshold", "hybrid"]

[grow]
tolerance = 0.15
connectivity = "four"

[[case]]
label = "f"
image = "f.pgm"
truth = "f_truth.png"
"#,
    )
    .unwrap();
    let cfg = parse_config(&config).unwrap();
    assert_eq!(cfg.report_format, ReportFormat::Json);
    let summary = run_pipeline(&cfg).unwrap();
    let path = summary.report_path.unwrap();
    assert_eq!(path, dir.path().join("results/report.json"));
    let rows: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert_eq!(rows[0]["algorithm"], "threshold");
    assert!(rows[0]["iterations"].as_u64().unwrap() >= 1);
}
