//! Batch driver: load, preprocess, segment with each selected algorithm,
//! score against ground truth, write masks and a report.

mod config;
mod report;
mod run;

pub use config::{
    parse_config, parse_config_str, Algorithm, Case, CaseSource, ReportFormat, RunConfig,
};
pub use report::{emit_report, render_csv, render_json, REPORT_COLUMNS, UNDEFINED};
pub use run::{
    report_file_name, run_pipeline, segment_with, CaseFailure, CaseResult, RunSummary, ERROR_LOG,
};
