//! `mefb`: evaluate multi-exposure fusion results from the command line.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use mefb_core::fusion::DEFAULT_LEVELS;
use mefb_core::metrics::{TsallisOrder, UnknownMetric};
use mefb_core::{ColorImage, Gray, MetricId, MetricParams};
use mefb_harness::{
    emit_report, evaluate, load_dataset, load_fused, rank, summary_table, Algorithm, BaselineFusion, FusionAlgorithm,
    HarnessError, LoadIssue, MetricSet,
};

#[derive(Parser)]
#[command(name = "mefb", version, about = "Multi-exposure image fusion benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score fused images (and optionally the built-in fusion) and write a report.
    Eval(EvalArgs),
    /// Run a built-in fusion algorithm over a dataset.
    Fuse(FuseArgs),
    /// Compute one metric on a single triple of images.
    Metric(MetricArgs),
}

#[derive(clap::Args)]
struct EvalArgs {
    /// Dataset root holding `input/<pair>/A.*, B.*` or `dataset.toml`.
    #[arg(long)]
    dataset: PathBuf,
    /// Directory of `<algorithm>/<pair>.*` fused images (or its parent with a `fused/` subdirectory).
    #[arg(long, required_unless_present = "with_baseline")]
    fused: Option<PathBuf>,
    /// Also run and time the built-in baseline fusion.
    #[arg(long)]
    with_baseline: bool,
    /// `all` or a comma-separated list of metric names.
    #[arg(long, default_value = "all")]
    metrics: String,
    #[arg(long, default_value = "./mefb-report")]
    out: PathBuf,
    /// Worker threads; 0 uses one per logical CPU.
    #[arg(long, env = "MEFB_WORKERS", default_value_t = 0)]
    workers: usize,
    /// Tsallis order used by TE.
    #[arg(long, default_value_t = TsallisOrder::DEFAULT.alpha())]
    alpha: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Baseline,
}

#[derive(clap::Args)]
struct FuseArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, value_enum, default_value = "baseline")]
    algo: Algo,
    /// Output root; images go to `<out>/fused/<algo>/<pair>.png`.
    #[arg(long)]
    out: PathBuf,
    /// Pyramid levels of the baseline fusion.
    #[arg(long, default_value_t = DEFAULT_LEVELS)]
    levels: usize,
    /// Skip pairs that fail to decode or fuse instead of aborting.
    #[arg(long)]
    skip_bad: bool,
}

#[derive(clap::Args)]
struct MetricArgs {
    #[arg(long)]
    name: String,
    /// Under-exposed source (ignored by single-image metrics).
    #[arg(long)]
    a: Option<PathBuf>,
    /// Over-exposed source (ignored by single-image metrics).
    #[arg(long)]
    b: Option<PathBuf>,
    /// Fused image.
    #[arg(long)]
    f: PathBuf,
    #[arg(long, default_value_t = TsallisOrder::DEFAULT.alpha())]
    alpha: f64,
}

/// Configuration problems exit with 2, runtime failures with 1.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn runtime(e: impl Display) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn params(alpha: f64) -> Result<MetricParams, Failure> {
    let tsallis = TsallisOrder::new(alpha).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(MetricParams { tsallis })
}

fn cmd_eval(args: EvalArgs) -> Outcome {
    let metrics = MetricSet::parse(&args.metrics, params(args.alpha)?).map_err(|e| Failure::Usage(e.to_string()))?;
    if metrics.is_empty() {
        return Err(Failure::Usage("no metrics selected".into()));
    }
    let dataset = load_dataset(&args.dataset).map_err(Failure::runtime)?;
    if dataset.is_empty() {
        return Err(Failure::Runtime(format!("no image pairs found in {}", args.dataset.display())));
    }
    let mut algorithms = Vec::new();
    if let Some(fused) = &args.fused {
        let set = load_fused(fused, &dataset).map_err(Failure::runtime)?;
        algorithms.extend(Algorithm::from_fused(&set));
    }
    if args.with_baseline {
        algorithms.push(Algorithm::Builtin(Arc::new(BaselineFusion::default())));
    }
    if algorithms.is_empty() {
        return Err(Failure::Runtime("no fused images found".into()));
    }
    log::info!(
        "scoring {} pairs x {} algorithms x {} metrics",
        dataset.len(),
        algorithms.len(),
        metrics.len()
    );
    let scores = evaluate(&dataset, &algorithms, &metrics, args.workers).map_err(Failure::runtime)?;
    let table = match rank(&scores) {
        Ok(t) => t,
        Err(HarnessError::EmptyMatrix) => return Err(Failure::Runtime("every score is missing".into())),
        Err(e) => return Err(Failure::runtime(e)),
    };
    let files = emit_report(&table, &scores, &args.out).map_err(Failure::runtime)?;
    print!("{}", summary_table(&table));
    println!("report written to {}", files.report.display());
    Ok(())
}

fn cmd_fuse(args: FuseArgs) -> Outcome {
    if args.levels == 0 {
        return Err(Failure::Usage("--levels must be at least 1".into()));
    }
    let algo: Box<dyn FusionAlgorithm> = match args.algo {
        Algo::Baseline => Box::new(BaselineFusion { levels: args.levels }),
    };
    let dataset = load_dataset(&args.dataset).map_err(Failure::runtime)?;
    let broken: Vec<_> = dataset
        .warnings
        .iter()
        .filter(|w| matches!(w.issue, LoadIssue::DecodeError(_)))
        .collect();
    if !broken.is_empty() && !args.skip_bad {
        let list: Vec<String> = broken.iter().map(|w| w.to_string()).collect();
        return Err(Failure::Runtime(list.join("\n")));
    }
    if dataset.is_empty() {
        return Err(Failure::Runtime(format!("no image pairs found in {}", args.dataset.display())));
    }
    let dir = args.out.join("fused").join(algo.id());
    fs::create_dir_all(&dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
    let mut written = 0;
    for entry in &dataset.entries {
        let result = ColorImage::open(&entry.under_path)
            .and_then(|u| ColorImage::open(&entry.over_path).map(|o| (u, o)))
            .and_then(|(u, o)| algo.fuse(&u, &o));
        match result {
            Ok(img) => {
                let path = dir.join(format!("{}.png", entry.pair_id));
                img.save_png(&path).map_err(Failure::runtime)?;
                written += 1;
            }
            Err(e) if args.skip_bad => log::warn!("{}: {e}", entry.pair_id),
            Err(e) => return Err(Failure::Runtime(format!("{}: {e}", entry.pair_id))),
        }
    }
    println!("wrote {written} images to {}", dir.display());
    Ok(())
}

fn open_gray(path: &Path) -> Result<Gray, Failure> {
    if !path.is_file() {
        return Err(Failure::Usage(format!("no such file: {}", path.display())));
    }
    ColorImage::open(path).map(|img| img.to_grayscale()).map_err(Failure::runtime)
}

fn cmd_metric(args: MetricArgs) -> Outcome {
    let id: MetricId = args.name.parse().map_err(|e: UnknownMetric| Failure::Usage(e.to_string()))?;
    let params = params(args.alpha)?;
    let f = open_gray(&args.f)?;
    let (a, b) = if id.is_single_image() {
        (f.clone(), f.clone())
    } else {
        let (Some(a), Some(b)) = (&args.a, &args.b) else {
            return Err(Failure::Usage(format!("{id} needs --a and --b")));
        };
        (open_gray(a)?, open_gray(b)?)
    };
    let v = id.compute(&a, &b, &f, &params).map_err(Failure::runtime)?;
    println!("{}={:.6}", id.name(), v.value);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Fuse(a) => cmd_fuse(a),
        Command::Metric(a) => cmd_metric(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
