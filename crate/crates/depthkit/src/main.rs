//! depthkit: multivariate data depth from the command line.
//!
//! Subcommands: compute depth values (exact or approximate), central
//! regions, medians, onion layers, and the timing / random-Tukey-depth /
//! invariance studies.  Exit codes: 0 success, 2 usage error, 3 data error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use depth_core::approx::{ApproxConfig, SampleMode, DEFAULT_DIRECTIONS};
use depth_core::dataset::{
    load_dataset, load_dissimilarity, region_to_csv, results_to_csv, DepthResult, Dataset, Region,
};
use depth_core::error::DepthError;
use depth_core::experiments::{
    run_invariance_suite, run_rtd_accuracy, run_timing, rtd_to_csv, timing_to_csv, ExperimentPlan,
};
use depth_core::local::{beta_localized_depth, kernelized_spatial_depth, KernelSpec};
use depth_core::notion::{build_notion, NotionParams, Strictness};
use depth_core::regions::{
    depth_median, depth_region_members, onion_layer_regions, prob_central_region, spatial_median,
    tukey_region_2d, SpatialMedianStatus,
};
use depth_core::rng::RandomSource;
use depth_core::scatter::{mcd_scatter, moment_scatter, ScatterModel};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "depthkit",
    version,
    about = "Multivariate data depth: eleven notions, regions, medians, studies"
)]
struct Cli {
    /// Cap the worker thread count (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// JSON file with default flag values (flags given on the command line win).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Depth of query points (default: every sample point) for one notion.
    Compute(ComputeArgs),
    /// Central region at a depth level (or probability content).
    Region(RegionArgs),
    /// Deepest point for a notion; optionally the iterative spatial median.
    Median(MedianArgs),
    /// Convex hull peeling layers of the sample.
    Layers(LayersArgs),
    /// Timing study over an (n, d) grid; plot-ready CSV.
    Bench(BenchArgs),
    /// Random Tukey depth accuracy study (hit rates and error quartiles).
    RtdStudy(RtdArgs),
    /// Invariance test matrix on randomized instances.
    Invariance(InvarianceArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WhitenKind {
    None,
    Cov,
    Mcd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Number,
    Portion,
}

#[derive(Args)]
struct ComputeArgs {
    /// One of: mahalanobis, lp, halfspace, projection, simplicial, oja,
    /// zonoid, spatial, skeleton, lens-ordinal, onion.
    #[arg(long)]
    notion: String,

    /// Sample CSV/JSON file.
    #[arg(long)]
    data: PathBuf,

    /// Query points CSV (rows of dissimilarities for lens-ordinal).
    #[arg(long)]
    points: Option<PathBuf>,

    /// n x n dissimilarity matrix CSV (required for lens-ordinal).
    #[arg(long)]
    dissimilarity: Option<PathBuf>,

    /// Force the exact engine (default where available).
    #[arg(long)]
    exact: bool,

    /// Use the approximate engine.
    #[arg(long)]
    approx: bool,

    /// Directions / sampled subsets for the approximate engine.
    #[arg(short = 'k', long = "k")]
    k: Option<usize>,

    #[arg(long)]
    seed: Option<u64>,

    /// Subset sampling mode for Monte-Carlo notions.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,

    /// Portion of all subsets in portion mode.
    #[arg(long)]
    portion: Option<f64>,

    /// Exponent of the L_p depth (p >= 1).
    #[arg(long)]
    p: Option<f64>,

    /// Beta of the beta-skeleton depth (2 = lens, 1 = spherical).
    #[arg(long)]
    beta: Option<f64>,

    /// Closed containment for the beta-skeleton predicates.
    #[arg(long)]
    closed: bool,

    #[arg(long, value_enum)]
    whiten: Option<WhitenKind>,

    #[arg(long)]
    mcd_alpha: Option<f64>,

    /// Localize the notion: conditioning parameter in (0, 1].
    #[arg(long, value_name = "BETA")]
    local: Option<f64>,

    /// Kernelized spatial depth with this Gaussian bandwidth (spatial only).
    #[arg(long, value_name = "H")]
    kernelized: Option<f64>,

    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Record real wall times in elapsed_ns (off by default so identical
    /// invocations produce byte-identical output).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct RegionArgs {
    #[arg(long)]
    notion: String,
    #[arg(long)]
    data: PathBuf,
    /// Depth level; halfspace in d = 2 yields an exact polygon.
    #[arg(long)]
    alpha: Option<f64>,
    /// Probability content: smallest level set holding ceil(beta n) points.
    #[arg(long)]
    prob_beta: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct MedianArgs {
    #[arg(long)]
    notion: String,
    #[arg(long)]
    data: PathBuf,
    /// Iterate the spatial median instead of picking the deepest point.
    #[arg(long)]
    weiszfeld: bool,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LayersArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Experiment plan JSON; the default plan covers the paper grid.
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RtdArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 3, 4, 5])]
    dims: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![50usize, 100, 200, 300])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    replicates: usize,
    #[arg(short = 'k', long, default_value_t = DEFAULT_DIRECTIONS)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hit rates only: lets the exact search stop early on certified misses.
    #[arg(long)]
    hit_only: bool,
    /// Evaluate only this many random sample points per replicate.
    #[arg(long)]
    points_cap: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InvarianceArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let code = match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}

fn exit_code_for(e: &DepthError) -> i32 {
    match e {
        DepthError::Unsupported(_) => 2,
        _ => 3,
    }
}

/// Flag defaults from --config (command-line flags take precedence).
#[derive(Default, serde::Deserialize)]
struct ConfigFile {
    k: Option<usize>,
    seed: Option<u64>,
    p: Option<f64>,
    beta: Option<f64>,
    portion: Option<f64>,
    mcd_alpha: Option<f64>,
}

fn load_config(path: &Option<PathBuf>) -> Result<ConfigFile, DepthError> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| DepthError::io(p, e))?;
            serde_json::from_str(&text)
                .map_err(|e| DepthError::data(format!("bad config file: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), DepthError> {
    let config = load_config(&cli.config)?;
    match cli.command {
        Command::Compute(args) => compute(args, &config),
        Command::Region(args) => region(args, &config),
        Command::Median(args) => median(args),
        Command::Layers(args) => layers(args),
        Command::Bench(args) => bench(args),
        Command::RtdStudy(args) => rtd_study(args),
        Command::Invariance(args) => invariance(args),
    }
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<(), DepthError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| DepthError::io(path, e)),
    }
}

fn usage(msg: impl Into<String>) -> DepthError {
    DepthError::Unsupported(msg.into())
}

fn load_data_with_dissimilarity(
    data_path: &PathBuf,
    dis: &Option<PathBuf>,
) -> Result<Dataset, DepthError> {
    let data = load_dataset(data_path)?;
    match dis {
        None => Ok(data),
        Some(p) => {
            let matrix = load_dissimilarity(p)?;
            data.with_dissimilarity(matrix)
        }
    }
}

fn scatter_for(
    kind: Option<WhitenKind>,
    data: &Dataset,
    mcd_alpha: f64,
    seed: u64,
) -> Result<Option<Arc<ScatterModel>>, DepthError> {
    match kind.unwrap_or(WhitenKind::None) {
        WhitenKind::None => Ok(None),
        WhitenKind::Cov => Ok(Some(Arc::new(moment_scatter(data)?))),
        WhitenKind::Mcd => {
            let mut rng = RandomSource::with_stream(seed, 0x6d6364);
            Ok(Some(Arc::new(mcd_scatter(
                data, mcd_alpha, &mut rng, 500, 50,
            )?)))
        }
    }
}

fn compute(args: ComputeArgs, config: &ConfigFile) -> Result<(), DepthError> {
    if args.exact && (args.approx || args.k.is_some()) {
        return Err(usage("--exact forbids --approx and -k"));
    }
    if args.kernelized.is_some() && args.notion != "spatial" {
        return Err(usage("--kernelized applies to --notion spatial only"));
    }
    if args.notion == "lens-ordinal" && args.dissimilarity.is_none() {
        return Err(usage("lens-ordinal requires --dissimilarity"));
    }

    let data = load_data_with_dissimilarity(&args.data, &args.dissimilarity)?;
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let mcd_alpha = args.mcd_alpha.or(config.mcd_alpha).unwrap_or(0.75);
    let params = NotionParams {
        p: args.p.or(config.p).unwrap_or(2.0),
        beta: args.beta.or(config.beta).unwrap_or(2.0),
        strictness: if args.closed {
            Strictness::Closed
        } else {
            Strictness::Strict
        },
        scatter: scatter_for(args.whiten, &data, mcd_alpha, seed)?,
    };
    let notion = build_notion(&args.notion, &params)?;

    let approx_cfg = if args.approx || args.k.is_some() {
        if !notion.supports_approximate() {
            return Err(usage(format!(
                "--approx is not available for {}; notions with approximate engines: halfspace, projection, simplicial, oja, skeleton",
                args.notion
            )));
        }
        Some(ApproxConfig {
            k: args.k.or(config.k).unwrap_or(DEFAULT_DIRECTIONS),
            seed,
            mode: match args.mode.unwrap_or(ModeArg::Number) {
                ModeArg::Number => SampleMode::Number,
                ModeArg::Portion => SampleMode::Portion,
            },
            portion: args.portion.or(config.portion).unwrap_or(1.0),
        })
    } else {
        if !notion.supports_exact() {
            return Err(usage(format!(
                "exact {} depth is unsupported; pass --approx",
                args.notion
            )));
        }
        None
    };

    // Queries: an explicit file, or every sample point.
    let queries: Vec<(String, Vec<f64>)> = match &args.points {
        Some(path) => {
            let q = load_dataset(path)?;
            if q.has_missing() {
                return Err(usage(
                    "query files with missing coordinates are served by the projection bound; see README",
                ));
            }
            (0..q.n())
                .map(|i| (q.ids()[i].clone(), q.row(i).to_vec()))
                .collect()
        }
        None => {
            if args.notion == "lens-ordinal" {
                (0..data.n())
                    .map(|i| {
                        let row = (0..data.n())
                            .map(|j| data.dissimilarity_at(i, j))
                            .collect();
                        (data.ids()[i].clone(), row)
                    })
                    .collect()
            } else {
                (0..data.n())
                    .map(|i| (data.ids()[i].clone(), data.row(i).to_vec()))
                    .collect()
            }
        }
    };

    let mut results = Vec::with_capacity(queries.len());
    for (id, y) in &queries {
        let t0 = Instant::now();
        let value = match (args.local, args.kernelized) {
            (Some(_), Some(_)) => {
                return Err(usage("--local and --kernelized are mutually exclusive"))
            }
            (Some(beta_loc), None) => {
                if approx_cfg.is_some() {
                    return Err(usage("--local works with the exact engines"));
                }
                beta_localized_depth(y, &data, notion.as_ref(), beta_loc)?
            }
            (None, Some(h)) => {
                kernelized_spatial_depth(y, &data, KernelSpec { bandwidth: h }, false)?.normalized
            }
            (None, None) => notion.compute(y, &data, approx_cfg.as_ref())?.value,
        };
        let elapsed = if args.timing {
            t0.elapsed().as_nanos() as u64
        } else {
            0
        };
        results.push(DepthResult {
            point_id: id.clone(),
            notion: args.notion.clone(),
            method: match &approx_cfg {
                Some(_) => "approx".into(),
                None => "exact".into(),
            },
            value,
            elapsed_ns: elapsed,
        });
    }
    emit(results_to_csv(&results)?, &args.out)
}

fn region(args: RegionArgs, config: &ConfigFile) -> Result<(), DepthError> {
    let data = load_dataset(&args.data)?;
    let params = NotionParams {
        p: args.p.or(config.p).unwrap_or(2.0),
        beta: args.beta.or(config.beta).unwrap_or(2.0),
        ..Default::default()
    };
    let notion = build_notion(&args.notion, &params)?;
    let region: Region = match (args.alpha, args.prob_beta) {
        (Some(_), Some(_)) => return Err(usage("--alpha and --prob-beta are mutually exclusive")),
        (None, None) => return Err(usage("pass --alpha or --prob-beta")),
        (Some(alpha), None) => {
            if args.notion == "halfspace" && data.dim() == 2 {
                tukey_region_2d(&data, alpha)?
            } else {
                depth_region_members(&data, notion.as_ref(), alpha, None)?
            }
        }
        (None, Some(beta)) => prob_central_region(&data, notion.as_ref(), beta, None)?.0,
    };
    emit(region_to_csv(&region), &args.out)
}

fn median(args: MedianArgs) -> Result<(), DepthError> {
    let data = load_dataset(&args.data)?;
    let mut out = String::from("notion,value,coords\n");
    if args.weiszfeld {
        if args.notion != "spatial" {
            return Err(usage("--weiszfeld applies to --notion spatial"));
        }
        let (point, status) = spatial_median(&data, args.tol, args.max_iter)?;
        if status == SpatialMedianStatus::MaxIterations {
            eprintln!("warning: spatial median hit the iteration limit");
        }
        out.push_str(&format!(
            "spatial-median,,{}\n",
            point
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(";")
        ));
    } else {
        let notion = build_notion(&args.notion, &NotionParams::default())?;
        let m = depth_median(&data, notion.as_ref())?;
        out.push_str(&format!(
            "{},{},{}\n",
            args.notion,
            m.value,
            m.point
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(";")
        ));
    }
    emit(out, &args.out)
}

fn layers(args: LayersArgs) -> Result<(), DepthError> {
    let data = load_dataset(&args.data)?;
    let regions = onion_layer_regions(&data)?;
    let mut out = String::from("layer,member_index,point_id\n");
    for (j, region) in regions.iter().enumerate() {
        if let Region::MemberSet { members, .. } = region {
            for &m in members {
                out.push_str(&format!("{},{},{}\n", j + 1, m, data.ids()[m]));
            }
        }
    }
    emit(out, &args.out)
}

fn bench(args: BenchArgs) -> Result<(), DepthError> {
    let plan = match &args.plan {
        None => ExperimentPlan::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| DepthError::io(path, e))?;
            ExperimentPlan::from_json(&text)?
        }
    };
    let rows = run_timing(&plan)?;
    emit(timing_to_csv(&rows), &args.out)
}

fn rtd_study(args: RtdArgs) -> Result<(), DepthError> {
    let rows = run_rtd_accuracy(
        &args.dims,
        &args.sizes,
        args.replicates,
        args.k,
        args.seed,
        args.hit_only,
        args.points_cap,
    )?;
    emit(rtd_to_csv(&rows), &args.out)
}

fn invariance(args: InvarianceArgs) -> Result<(), DepthError> {
    let report = run_invariance_suite(args.seed, args.trials)?;
    let ok = report.passed();
    emit(report.to_csv(), &args.out)?;
    if !ok {
        return Err(DepthError::Numeric("invariance suite failed".into()));
    }
    Ok(())
}
