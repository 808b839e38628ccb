use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hybridseg::pipeline::{self, Algorithm, ReportFormat, RunConfig};
use hybridseg::raster::{load_image, load_mask, save_image, save_mask};
use hybridseg::segment::Connectivity;
use hybridseg::{make_phantom, metric_report, preprocess, Error, Phantom};

const EXIT_CASE_FAILED: u8 = 1;
const EXIT_CONFIG_INVALID: u8 = 2;

#[derive(Parser)]
#[command(
    name = "hybridseg",
    version,
    about = "Hybrid region-growing / threshold segmentation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment one image with one algorithm and write the mask
    Segment(SegmentArgs),
    /// Compare an observed mask against a ground-truth mask
    Evaluate(EvaluateArgs),
    /// Run a batch described by a config file
    Batch(BatchArgs),
    /// Write a synthetic phantom image and its ground truth
    Phantom(PhantomArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    RegionGrowing,
    Threshold,
    Hybrid,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::RegionGrowing => Algorithm::RegionGrowing,
            AlgorithmArg::Threshold => Algorithm::Threshold,
            AlgorithmArg::Hybrid => Algorithm::Hybrid,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConnectivityArg {
    Four,
    Eight,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Parameter flags; each one overrides the matching config value.
#[derive(Args, Default)]
struct ParamFlags {
    #[arg(long)]
    stretch_low_pct: Option<f64>,
    #[arg(long)]
    stretch_high_pct: Option<f64>,
    #[arg(long)]
    median_window: Option<usize>,
    /// 0 disables wavelet denoising
    #[arg(long)]
    swt_levels: Option<usize>,
    /// Region-growing admission tolerance
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum)]
    connectivity: Option<ConnectivityArg>,
    /// Threshold convergence tolerance
    #[arg(long)]
    delta_t: Option<f64>,
}

impl ParamFlags {
    fn apply(&self, cfg: &mut RunConfig) {
        let p = &mut cfg.preprocess;
        if let Some(v) = self.stretch_low_pct {
            p.stretch_low_pct = v;
        }
        if let Some(v) = self.stretch_high_pct {
            p.stretch_high_pct = v;
        }
        if let Some(v) = self.median_window {
            p.median_window = v;
        }
        if let Some(v) = self.swt_levels {
            p.swt_levels = v;
        }
        if let Some(v) = self.tolerance {
            cfg.grow.tolerance = v;
        }
        if let Some(c) = self.connectivity {
            cfg.grow.connectivity = match c {
                ConnectivityArg::Four => Connectivity::Four,
                ConnectivityArg::Eight => Connectivity::Eight,
            };
        }
        if let Some(v) = self.delta_t {
            cfg.delta_t = v;
        }
    }
}

#[derive(Args)]
struct SegmentArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long, value_enum, default_value = "hybrid")]
    algorithm: AlgorithmArg,
    /// Output mask (.pgm or .png)
    #[arg(long)]
    out: PathBuf,
    /// Optional ground truth; prints metrics when given
    #[arg(long)]
    truth: Option<PathBuf>,
    #[command(flatten)]
    params: ParamFlags,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    observed: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Print JSON instead of aligned text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Comma-separated subset of region_growing,threshold,hybrid
    #[arg(long, value_enum, value_delimiter = ',')]
    algorithms: Option<Vec<AlgorithmArg>>,
    #[arg(long)]
    emit_masks: Option<bool>,
    #[arg(long, value_enum)]
    report_format: Option<FormatArg>,
    #[command(flatten)]
    params: ParamFlags,
}

#[derive(Args)]
struct PhantomArgs {
    #[arg(long)]
    out_image: PathBuf,
    #[arg(long)]
    out_truth: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    noise: Option<f64>,
    /// Radius of the dark hole inside the tumor
    #[arg(long)]
    hole_radius: Option<f64>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| pipeline::UNDEFINED.to_string(), |v| format!("{v:.6}"))
}

fn print_metrics(m: &hybridseg::MetricReport) {
    println!("jaccard           {:.6}", m.jaccard);
    println!("jaccard_distance  {:.6}", m.jaccard_distance);
    println!("dice              {:.6}", m.dice);
    println!("accuracy          {:.6}", m.accuracy);
    println!("precision         {}", fmt_opt(m.precision));
    println!("recall            {}", fmt_opt(m.recall));
    println!("specificity       {}", fmt_opt(m.specificity));
    println!("f_measure         {}", fmt_opt(m.f_measure));
    println!("g_measure         {}", fmt_opt(m.g_measure));
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::ConfigMissing { .. }
            | Error::ConfigSyntax(_)
            | Error::ConfigInvalid { .. }
            | Error::InvalidParameter { .. }
    )
}

fn segment(args: SegmentArgs) -> anyhow::Result<()> {
    let mut cfg = RunConfig::new(Vec::new(), ".");
    args.params.apply(&mut cfg);
    let img = load_image(&args.image)?;
    let pre = preprocess(&img, &cfg.preprocess)?;
    let (mask, trace) = pipeline::segment_with(args.algorithm.into(), &pre, &cfg)?;
    save_mask(&mask, &args.out)?;
    println!(
        "wrote {} ({} foreground pixels)",
        args.out.display(),
        mask.count_ones()
    );
    if let Some(t) = trace {
        println!(
            "final_t {:.6} after {} iterations ({:?})",
            t.final_t, t.iterations, t.stop
        );
    }
    if let Some(truth) = args.truth {
        print_metrics(&metric_report(&mask, &load_mask(truth)?)?);
    }
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> anyhow::Result<()> {
    let observed = load_mask(&args.observed)?;
    let truth = load_mask(&args.truth)?;
    let report = metric_report(&observed, &truth)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_metrics(&report);
    }
    Ok(())
}

fn batch(args: BatchArgs) -> Result<u8, Error> {
    let mut cfg = pipeline::parse_config(&args.config)?;
    if let Some(dir) = args.output_dir {
        cfg.output_dir = dir;
    }
    if let Some(algs) = args.algorithms {
        cfg.algorithms = algs.into_iter().map(Algorithm::from).collect();
        cfg.algorithms.dedup();
    }
    if let Some(v) = args.emit_masks {
        cfg.emit_masks = v;
    }
    if let Some(f) = args.report_format {
        cfg.report_format = match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        };
    }
    args.params.apply(&mut cfg);
    cfg.validate()?;

    let summary = pipeline::run_pipeline(&cfg)?;
    if let Some(path) = &summary.report_path {
        println!("wrote {} ({} rows)", path.display(), summary.results.len());
    }
    for f in &summary.failures {
        eprintln!("case {} failed: {}", f.label, f.error);
    }
    Ok(if summary.failures.is_empty() {
        0
    } else {
        EXIT_CASE_FAILED
    })
}

fn phantom(args: PhantomArgs) -> anyhow::Result<()> {
    let mut p = Phantom::with_seed(args.seed);
    if let Some(n) = args.noise {
        p.noise = n;
    }
    if let Some(r) = args.hole_radius {
        p.hole.radius = r;
    }
    let (img, truth) = make_phantom(&p).context("invalid phantom parameters")?;
    save_image(&img, &args.out_image)?;
    save_mask(&truth, &args.out_truth)?;
    if truth.count_ones() == 0 {
        bail!("phantom has an empty ground truth");
    }
    println!(
        "wrote {} and {} ({} tumor pixels)",
        args.out_image.display(),
        args.out_truth.display(),
        truth.count_ones()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Batch(args) => match batch(args) {
            Ok(code) => return ExitCode::from(code),
            Err(e) => Err(e.into()),
        },
        Command::Segment(args) => segment(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Phantom(args) => phantom(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let config = e.downcast_ref::<Error>().is_some_and(is_config_error);
            ExitCode::from(if config {
                EXIT_CONFIG_INVALID
            } else {
                EXIT_CASE_FAILED
            })
        }
    }
}
