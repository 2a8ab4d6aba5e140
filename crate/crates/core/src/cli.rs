//! The `mudepth` command-line interface.
//!
//! Subcommands: `depth`, `rank`, `outliers`, `ddplot`, `classify` and
//! `counterexample`. Inputs are CSV files (curves, distance matrices or
//! histograms); outputs are CSV with numbers at 10 significant digits.
//! Exit codes: 0 on success, 2 on validation errors (bad inputs, flags or
//! file contents), 1 on runtime errors. `METRIC_DEPTH_THREADS` caps the
//! computation thread count (0 or unset picks automatically).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    dd_classify, dd_plot, flag_outliers, rank_by_depth_with, Classification, DepthReport,
};
use crate::counterexamples::{
    center_maximality_check, example_depth_map, section, ExampleDistribution, SectionLine,
};
use crate::depth::{depth_profile, DepthEngine, Metric, Sample};
use crate::io;
use crate::metrics::{fit_pca_basis, CurveMetric, Curve, DistanceMatrix, StepCdf, WassersteinMetric};
use crate::{Error, Result};

/// Run the CLI on the given argument vector and return the process exit
/// code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match configure_threads().and_then(|()| dispatch(cli)) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            if err.is_validation() {
                2
            } else {
                1
            }
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("METRIC_DEPTH_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.parse().map_err(|_| Error::Config {
        reason: format!("METRIC_DEPTH_THREADS must be a nonnegative integer, got {raw:?}"),
    })?;
    if threads > 0 {
        // A second initialization (e.g. in tests) keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    Ok(())
}

#[derive(Parser)]
#[command(
    name = "mudepth",
    version,
    about = "Depth-based ranking, outlier detection and classification over user-chosen distances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Depth of query items with respect to a sample
    Depth(DepthArgs),
    /// Rank every sample item by its depth within the sample
    Rank(RankArgs),
    /// Flag the k least-deep sample items
    Outliers(OutliersArgs),
    /// Depth of queries in two samples (DD-plot data)
    Ddplot(DdplotArgs),
    /// Assign queries to the class in which they are deepest
    Classify(ClassifyArgs),
    /// Depth map and sections for a bundled example distribution
    Counterexample(CounterexampleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricChoice {
    /// Trapezoid L2 distance between curves
    L2,
    /// Supremum distance between curves
    Sup,
    /// L2 distance between second derivatives (pseudo-distance)
    Deriv2,
    /// Euclidean distance between leading principal scores (pseudo-distance)
    Pca,
    /// Wasserstein distance between distribution functions
    Wasserstein,
    /// Distances stored in the matrix file
    Matrix,
    /// Euclidean distance on vectors (library API only)
    Euclidean,
    /// Minkowski distance on vectors (library API only)
    Minkowski,
}

#[derive(Args)]
struct InputArgs {
    /// Curves CSV: header `label,t=<v1>,...`; rows `name#channel` group into
    /// multi-channel curves
    #[arg(long, value_name = "FILE")]
    curves: Option<PathBuf>,
    /// Distance matrix CSV with matching row and column labels
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Histograms CSV in long format `label,bin_left,bin_right,count`
    #[arg(long, value_name = "FILE")]
    histograms: Option<PathBuf>,
    /// Distance to use (curves: l2, sup, deriv2, pca; histograms: wasserstein)
    #[arg(long, value_enum)]
    metric: Option<MetricChoice>,
    /// Principal components kept by --metric pca
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Wasserstein order used by --metric wasserstein
    #[arg(long, default_value_t = 2.0)]
    r: f64,
    /// Average consecutive grid index blocks of this width before measuring
    #[arg(long, value_name = "WIDTH")]
    block_average: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    /// Evaluate every sample pair
    Exact,
    /// Average over a seeded uniform subsample of pairs
    Subsampled,
}

#[derive(Args)]
struct EngineArgs {
    #[arg(long, value_enum, default_value_t = EngineChoice::Exact)]
    engine: EngineChoice,
    /// Pairs evaluated per query by --engine subsampled
    #[arg(long)]
    budget: Option<u64>,
    /// Seed for --engine subsampled
    #[arg(long, default_value_t = 0)]
    subsample_seed: u64,
}

impl EngineArgs {
    fn to_engine(&self) -> Result<DepthEngine> {
        match self.engine {
            EngineChoice::Exact => Ok(DepthEngine::Exact),
            EngineChoice::Subsampled => {
                let budget = self.budget.ok_or_else(|| Error::Config {
                    reason: "--engine subsampled requires --budget".into(),
                })?;
                Ok(DepthEngine::Subsampled {
                    budget,
                    seed: self.subsample_seed,
                })
            }
        }
    }
}

#[derive(Args)]
struct DepthArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Queries: a CSV file for curves/histograms input, a comma-separated
    /// label list for matrix input. Defaults to every sample item.
    #[arg(long, value_name = "SPEC")]
    queries: Option<String>,
    /// Restrict the matrix sample to these comma-separated labels
    #[arg(long, value_name = "LABELS")]
    sample: Option<String>,
    #[command(flatten)]
    engine: EngineArgs,
    /// Output file (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OutliersArgs {
    #[command(flatten)]
    input: InputArgs,
    /// How many least-deep items to flag
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DdplotArgs {
    /// Curves CSV holding sample A
    #[arg(long, value_name = "FILE")]
    curves_a: Option<PathBuf>,
    /// Curves CSV holding sample B
    #[arg(long, value_name = "FILE")]
    curves_b: Option<PathBuf>,
    /// Histograms CSV holding sample A
    #[arg(long, value_name = "FILE")]
    histograms_a: Option<PathBuf>,
    /// Histograms CSV holding sample B
    #[arg(long, value_name = "FILE")]
    histograms_b: Option<PathBuf>,
    /// Distance matrix covering both samples and all queries
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Comma-separated labels of sample A (matrix input)
    #[arg(long, value_name = "LABELS")]
    sample_a: Option<String>,
    /// Comma-separated labels of sample B (matrix input)
    #[arg(long, value_name = "LABELS")]
    sample_b: Option<String>,
    /// Queries: CSV file (curves/histograms) or label list (matrix).
    /// Defaults to the items of both samples.
    #[arg(long, value_name = "SPEC")]
    queries: Option<String>,
    #[arg(long, value_enum)]
    metric: Option<MetricChoice>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 2.0)]
    r: f64,
    #[arg(long, value_name = "WIDTH")]
    block_average: Option<usize>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Class definition NAME=SPEC, repeated; SPEC is a CSV file
    /// (curves/histograms mode) or a comma-separated label list (matrix
    /// mode)
    #[arg(long = "class", value_name = "NAME=SPEC", required = true)]
    classes: Vec<String>,
    /// Distance matrix covering every class item and query (matrix mode)
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Treat class SPECs as curve CSV files
    #[arg(long, conflicts_with = "matrix")]
    curve_classes: bool,
    /// Treat class SPECs as histogram CSV files
    #[arg(long, conflicts_with_all = ["matrix", "curve_classes"])]
    histogram_classes: bool,
    /// Queries: CSV file (curves/histograms mode) or label list (matrix
    /// mode, defaulting to all matrix labels)
    #[arg(long, value_name = "SPEC")]
    queries: Option<String>,
    #[arg(long, value_enum)]
    metric: Option<MetricChoice>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 2.0)]
    r: f64,
    #[arg(long, value_name = "WIDTH")]
    block_average: Option<usize>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CounterexampleArgs {
    /// Which bundled distribution: 1 (normal mixture), 2 (four squares),
    /// 3 (frame)
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    example: u8,
    /// Sample size
    #[arg(long, default_value_t = 5000)]
    n: usize,
    /// Sampler seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Grid nodes per axis (odd, so the axes contain 0)
    #[arg(long, default_value_t = 101)]
    grid: usize,
    #[command(flatten)]
    engine: EngineArgs,
    /// Output file prefix (default `example<N>`)
    #[arg(long, value_name = "PREFIX")]
    out: Option<String>,
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Depth(args) => run_depth(args),
        Command::Rank(args) => run_rank(args),
        Command::Outliers(args) => run_outliers(args),
        Command::Ddplot(args) => run_ddplot(args),
        Command::Classify(args) => run_classify(args),
        Command::Counterexample(args) => run_counterexample(args),
    }
}

/// One loaded sample with its metric, monomorphized per input kind.
enum LoadedInput {
    Curves {
        labels: Vec<String>,
        items: Vec<Curve>,
        metric: CurveMetric,
    },
    Histograms {
        labels: Vec<String>,
        items: Vec<StepCdf>,
        metric: WassersteinMetric,
    },
    Matrix(DistanceMatrix),
}

fn config_error(reason: impl Into<String>) -> Error {
    Error::Config {
        reason: reason.into(),
    }
}

impl InputArgs {
    fn load(&self) -> Result<LoadedInput> {
        let supplied =
            self.curves.is_some() as u8 + self.matrix.is_some() as u8 + self.histograms.is_some() as u8;
        if supplied != 1 {
            return Err(config_error(
                "exactly one of --curves, --matrix or --histograms is required",
            ));
        }
        if let Some(path) = &self.curves {
            let (labels, items) =
                load_curves(path, self.block_average)?;
            let metric = curve_metric(self.metric, self.k, &items)?;
            return Ok(LoadedInput::Curves {
                labels,
                items,
                metric,
            });
        }
        if let Some(path) = &self.histograms {
            match self.metric {
                None | Some(MetricChoice::Wasserstein) => {}
                Some(_) => {
                    return Err(config_error(
                        "histogram input supports only --metric wasserstein",
                    ))
                }
            }
            if self.block_average.is_some() {
                return Err(config_error("--block-average applies to curve input only"));
            }
            let (labels, items) = split_pairs(io::read_histograms_csv(path)?);
            return Ok(LoadedInput::Histograms {
                labels,
                items,
                metric: WassersteinMetric::new(self.r)?,
            });
        }
        let path = self.matrix.as_ref().expect("counted above");
        match self.metric {
            None | Some(MetricChoice::Matrix) => {}
            Some(_) => {
                return Err(config_error(
                    "matrix input uses the stored distances; callback metrics do not apply",
                ))
            }
        }
        if self.block_average.is_some() {
            return Err(config_error("--block-average applies to curve input only"));
        }
        Ok(LoadedInput::Matrix(io::read_matrix_csv(path)?))
    }
}

fn split_pairs<T>(pairs: Vec<(String, T)>) -> (Vec<String>, Vec<T>) {
    pairs.into_iter().unzip()
}

fn load_curves(path: &Path, block_average: Option<usize>) -> Result<(Vec<String>, Vec<Curve>)> {
    let (labels, mut items) = split_pairs(io::read_curves_csv(path)?);
    if let Some(width) = block_average {
        items = items
            .iter()
            .map(|c| crate::metrics::block_average_curve(c, width))
            .collect::<Result<_>>()?;
    }
    Ok((labels, items))
}

fn curve_metric(choice: Option<MetricChoice>, k: usize, sample: &[Curve]) -> Result<CurveMetric> {
    match choice {
        Some(MetricChoice::L2) => Ok(CurveMetric::L2),
        Some(MetricChoice::Sup) => Ok(CurveMetric::Sup),
        Some(MetricChoice::Deriv2) => Ok(CurveMetric::SecondDerivative),
        Some(MetricChoice::Pca) => Ok(CurveMetric::Pca(fit_pca_basis(sample, k)?)),
        Some(MetricChoice::Wasserstein) => Err(config_error(
            "--metric wasserstein applies to histogram input",
        )),
        Some(MetricChoice::Matrix) => Err(config_error("--metric matrix applies to matrix input")),
        Some(MetricChoice::Euclidean) | Some(MetricChoice::Minkowski) => Err(config_error(
            "vector metrics have no file format; use the library API",
        )),
        None => Err(config_error(
            "curve input requires --metric l2|sup|deriv2|pca",
        )),
    }
}

fn parse_label_list(spec: &str) -> Vec<String> {
    spec.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn matrix_indices(matrix: &DistanceMatrix, spec: Option<&str>) -> Result<Vec<usize>> {
    match spec {
        None => Ok((0..matrix.n()).collect()),
        Some(spec) => parse_label_list(spec)
            .iter()
            .map(|label| matrix.require_index(label))
            .collect(),
    }
}

fn emit(out: Option<&PathBuf>, contents: &str) -> Result<()> {
    match out {
        Some(path) => Ok(fs::write(path, contents)?),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

/// Depth of each query against a sample, as a sorted report.
fn profile_report<P, M>(
    sample_items: Vec<P>,
    metric: M,
    query_labels: Vec<String>,
    queries: &[P],
    engine: DepthEngine,
) -> Result<DepthReport>
where
    P: Sync,
    M: Metric<P>,
{
    let sample = Sample::new(sample_items, metric);
    let depths = depth_profile(queries, &sample, engine)?;
    Ok(DepthReport::new(query_labels.into_iter().zip(depths).collect()))
}

fn run_depth(args: DepthArgs) -> Result<()> {
    let engine = args.engine.to_engine()?;
    let report = match args.input.load()? {
        LoadedInput::Curves {
            labels,
            items,
            metric,
        } => {
            if args.sample.is_some() {
                return Err(config_error("--sample applies to matrix input only"));
            }
            let (query_labels, queries) = match &args.queries {
                Some(spec) => {
                    load_curves(Path::new(spec), args.input.block_average)?
                }
                None => (labels.clone(), items.clone()),
            };
            profile_report(items, metric, query_labels, &queries, engine)?
        }
        LoadedInput::Histograms {
            labels,
            items,
            metric,
        } => {
            if args.sample.is_some() {
                return Err(config_error("--sample applies to matrix input only"));
            }
            let (query_labels, queries) = match &args.queries {
                Some(spec) => split_pairs(io::read_histograms_csv(Path::new(spec))?),
                None => (labels.clone(), items.clone()),
            };
            profile_report(items, metric, query_labels, &queries, engine)?
        }
        LoadedInput::Matrix(matrix) => {
            let sample_indices = matrix_indices(&matrix, args.sample.as_deref())?;
            let query_indices = matrix_indices(&matrix, args.queries.as_deref())?;
            let query_labels: Vec<String> = query_indices
                .iter()
                .map(|&i| matrix.labels()[i].clone())
                .collect();
            profile_report(sample_indices, &matrix, query_labels, &query_indices, engine)?
        }
    };
    emit(args.out.as_ref(), &io::depth_report_csv(&report))
}

fn rank_report(input: &InputArgs, engine: DepthEngine) -> Result<DepthReport> {
    match input.load()? {
        LoadedInput::Curves {
            labels,
            items,
            metric,
        } => rank_by_depth_with(&labels, &Sample::new(items, metric), engine),
        LoadedInput::Histograms {
            labels,
            items,
            metric,
        } => rank_by_depth_with(&labels, &Sample::new(items, metric), engine),
        LoadedInput::Matrix(matrix) => {
            let labels = matrix.labels().to_vec();
            let indices: Vec<usize> = (0..matrix.n()).collect();
            rank_by_depth_with(&labels, &Sample::new(indices, &matrix), engine)
        }
    }
}

fn run_rank(args: RankArgs) -> Result<()> {
    let report = rank_report(&args.input, args.engine.to_engine()?)?;
    emit(args.out.as_ref(), &io::depth_report_csv(&report))
}

fn run_outliers(args: OutliersArgs) -> Result<()> {
    let report = rank_report(&args.input, args.engine.to_engine()?)?;
    let flags = flag_outliers(&report, args.k)?;
    if !flags.tie_spill.is_empty() {
        eprintln!(
            "note: ties at the cutoff depth also match: {}",
            flags.tie_spill.join(", ")
        );
    }
    let depth_of: std::collections::HashMap<&str, f64> = report
        .items()
        .iter()
        .map(|(label, depth)| (label.as_str(), depth.value))
        .collect();
    let mut out = String::from("label,depth,rank\n");
    for (position, label) in flags.labels.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}\n",
            label,
            io::format_significant(depth_of[label.as_str()], io::OUTPUT_DIGITS),
            position + 1
        ));
    }
    emit(args.out.as_ref(), &out)
}

fn run_ddplot(args: DdplotArgs) -> Result<()> {
    let points = if let Some(matrix_path) = &args.matrix {
        if args.curves_a.is_some() || args.histograms_a.is_some() {
            return Err(config_error("choose either --matrix or per-sample files"));
        }
        let matrix = io::read_matrix_csv(matrix_path)?;
        let a = matrix_indices(
            &matrix,
            Some(args.sample_a.as_deref().ok_or_else(|| {
                config_error("matrix mode requires --sample-a and --sample-b label lists")
            })?),
        )?;
        let b = matrix_indices(
            &matrix,
            Some(args.sample_b.as_deref().ok_or_else(|| {
                config_error("matrix mode requires --sample-a and --sample-b label lists")
            })?),
        )?;
        let queries = matrix_indices(&matrix, args.queries.as_deref())?;
        let labels: Vec<String> = queries.iter().map(|&i| matrix.labels()[i].clone()).collect();
        dd_plot(
            &labels,
            &queries,
            &Sample::new(a, &matrix),
            &Sample::new(b, &matrix),
        )?
    } else if args.curves_a.is_some() || args.curves_b.is_some() {
        let (path_a, path_b) = match (&args.curves_a, &args.curves_b) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(config_error("ddplot needs both --curves-a and --curves-b")),
        };
        let (labels_a, items_a) = load_curves(path_a, args.block_average)?;
        let (labels_b, items_b) = load_curves(path_b, args.block_average)?;
        let (query_labels, queries) = match &args.queries {
            Some(spec) => load_curves(Path::new(spec), args.block_average)?,
            None => (
                labels_a.iter().chain(&labels_b).cloned().collect(),
                items_a.iter().chain(&items_b).cloned().collect(),
            ),
        };
        // One metric must cover both samples and the queries; the PCA basis
        // is fitted on the union of the two samples.
        let combined: Vec<Curve> = items_a.iter().chain(&items_b).cloned().collect();
        let metric = curve_metric(args.metric, args.k, &combined)?;
        dd_plot(
            &query_labels,
            &queries,
            &Sample::new(items_a, metric.clone()),
            &Sample::new(items_b, metric),
        )?
    } else if args.histograms_a.is_some() || args.histograms_b.is_some() {
        let (path_a, path_b) = match (&args.histograms_a, &args.histograms_b) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(config_error(
                    "ddplot needs both --histograms-a and --histograms-b",
                ))
            }
        };
        match args.metric {
            None | Some(MetricChoice::Wasserstein) => {}
            Some(_) => {
                return Err(config_error(
                    "histogram input supports only --metric wasserstein",
                ))
            }
        }
        let (labels_a, items_a) = split_pairs(io::read_histograms_csv(path_a)?);
        let (labels_b, items_b) = split_pairs(io::read_histograms_csv(path_b)?);
        let (query_labels, queries) = match &args.queries {
            Some(spec) => split_pairs(io::read_histograms_csv(Path::new(spec))?),
            None => (
                labels_a.iter().chain(&labels_b).cloned().collect(),
                items_a.iter().chain(&items_b).cloned().collect(),
            ),
        };
        let metric = WassersteinMetric::new(args.r)?;
        dd_plot(
            &query_labels,
            &queries,
            &Sample::new(items_a, metric),
            &Sample::new(items_b, metric),
        )?
    } else {
        return Err(config_error(
            "ddplot needs --matrix, --curves-a/--curves-b or --histograms-a/--histograms-b",
        ));
    };
    emit(args.out.as_ref(), &io::dd_points_csv(&points))
}

fn parse_class_spec(spec: &str) -> Result<(String, String)> {
    spec.split_once('=')
        .map(|(name, rest)| (name.trim().to_string(), rest.trim().to_string()))
        .filter(|(name, rest)| !name.is_empty() && !rest.is_empty())
        .ok_or_else(|| config_error(format!("--class must look like NAME=SPEC, got {spec:?}")))
}

fn classify_rows<P, M>(
    class_names: Vec<String>,
    class_samples: Vec<Sample<P, M>>,
    query_labels: Vec<String>,
    queries: &[P],
) -> Result<Vec<(String, Classification)>>
where
    M: Metric<P>,
{
    let classes: Vec<(String, Sample<P, M>)> =
        class_names.into_iter().zip(class_samples).collect();
    query_labels
        .into_iter()
        .zip(queries)
        .map(|(label, query)| Ok((label, dd_classify(query, &classes)?)))
        .collect()
}

fn run_classify(args: ClassifyArgs) -> Result<()> {
    let specs: Vec<(String, String)> = args
        .classes
        .iter()
        .map(|s| parse_class_spec(s))
        .collect::<Result<_>>()?;
    if specs.len() < 2 {
        return Err(config_error("classification needs at least two --class"));
    }
    let class_names: Vec<String> = specs.iter().map(|(name, _)| name.clone()).collect();

    let rows = if let Some(matrix_path) = &args.matrix {
        let matrix = io::read_matrix_csv(matrix_path)?;
        let samples: Vec<Sample<usize, &DistanceMatrix>> = specs
            .iter()
            .map(|(_, spec)| Ok(Sample::new(matrix_indices(&matrix, Some(spec))?, &matrix)))
            .collect::<Result<_>>()?;
        let queries = matrix_indices(&matrix, args.queries.as_deref())?;
        let labels: Vec<String> = queries.iter().map(|&i| matrix.labels()[i].clone()).collect();
        classify_rows(class_names.clone(), samples, labels, &queries)?
    } else if args.curve_classes {
        let loaded: Vec<(Vec<String>, Vec<Curve>)> = specs
            .iter()
            .map(|(_, spec)| load_curves(Path::new(spec), args.block_average))
            .collect::<Result<_>>()?;
        let queries_spec = args
            .queries
            .as_ref()
            .ok_or_else(|| config_error("curve classification requires --queries FILE"))?;
        let (query_labels, queries) = load_curves(Path::new(queries_spec), args.block_average)?;
        let union: Vec<Curve> = loaded.iter().flat_map(|(_, c)| c.clone()).collect();
        let metric = curve_metric(args.metric, args.k, &union)?;
        let samples: Vec<Sample<Curve, CurveMetric>> = loaded
            .into_iter()
            .map(|(_, items)| Sample::new(items, metric.clone()))
            .collect();
        classify_rows(class_names.clone(), samples, query_labels, &queries)?
    } else if args.histogram_classes {
        match args.metric {
            None | Some(MetricChoice::Wasserstein) => {}
            Some(_) => {
                return Err(config_error(
                    "histogram input supports only --metric wasserstein",
                ))
            }
        }
        let metric = WassersteinMetric::new(args.r)?;
        let samples: Vec<Sample<StepCdf, WassersteinMetric>> = specs
            .iter()
            .map(|(_, spec)| {
                let (_, items) = split_pairs(io::read_histograms_csv(Path::new(spec))?);
                Ok(Sample::new(items, metric))
            })
            .collect::<Result<_>>()?;
        let queries_spec = args
            .queries
            .as_ref()
            .ok_or_else(|| config_error("histogram classification requires --queries FILE"))?;
        let (query_labels, queries) = split_pairs(io::read_histograms_csv(Path::new(queries_spec))?);
        classify_rows(class_names.clone(), samples, query_labels, &queries)?
    } else {
        return Err(config_error(
            "classify needs --matrix, --curve-classes or --histogram-classes",
        ));
    };
    emit(args.out.as_ref(), &io::classifications_csv(&class_names, &rows))
}

fn run_counterexample(args: CounterexampleArgs) -> Result<()> {
    if args.grid < 3 || args.grid % 2 == 0 {
        return Err(config_error(
            "--grid must be an odd number of at least 3 so the axes contain 0",
        ));
    }
    let distribution = ExampleDistribution::from_id(args.example)?;
    let engine = args.engine.to_engine()?;
    let map = example_depth_map(distribution, args.n, args.seed, args.grid, engine)?;
    let sections = [
        ("x1", SectionLine::X2Zero, "section_x2_0"),
        ("x2", SectionLine::X1Zero, "section_x1_0"),
        ("x1", SectionLine::Diagonal, "section_diag"),
    ];
    let mut files: Vec<(String, String)> = Vec::new();
    let prefix = args
        .out
        .clone()
        .unwrap_or_else(|| format!("example{}", args.example));
    files.push((format!("{prefix}_map.csv"), io::depth_map_csv(&map)));
    for (coordinate, line, suffix) in sections {
        let cut = section(&map, line)?;
        files.push((
            format!("{prefix}_{suffix}.csv"),
            io::section_csv(coordinate, &cut),
        ));
    }
    let centre = center_maximality_check(&map)?;

    // Everything is computed; only now touch the filesystem.
    for (name, contents) in &files {
        fs::write(name, contents)?;
    }
    let digits = io::OUTPUT_DIGITS;
    println!(
        "example {} n={} seed={} grid={}x{}",
        args.example, args.n, args.seed, args.grid, args.grid
    );
    println!(
        "center_depth={} global_max_depth={} is_center_max={}",
        io::format_significant(centre.center_depth, digits),
        io::format_significant(centre.global_max_depth, digits),
        centre.is_center_max
    );
    println!(
        "wrote {}",
        files
            .iter()
            .map(|(name, _)| name.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(())
}
