//! Command line front end: `estimate`, `sweep`, `synth` and `benchmark`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baselines::{BenchmarkReport, CorrelationConfig};
use crate::battery::{battery_grid, run_battery, Battery};
use crate::error::{FisherError, Result};
use crate::estimator::Estimator;
use crate::io::{
    fmt_opt, load_matrix, normalize_mutation_matrix, save_matrix_csv, svg, write_table, Delimiter,
    InputDescriptor, MatrixFile, Orientation, RunReport, Timing,
};
use crate::matrix::DataMatrix;
use crate::preprocess::{preprocess, PreprocessConfig};
use crate::separability::{alpha_sweep_with, AlphaGrid, KernelConfig, SeparabilityProfile, DEFAULT_BLOCK_SIZE};
use crate::synthdata::{generate, ManifoldKind, SyntheticSpec};

/// Dimensions of the reference curves drawn under the empirical sweep.
const REFERENCE_DIMS: [f64; 8] = [2.0, 3.0, 5.0, 8.0, 12.0, 20.0, 40.0, 70.0];

const HISTOGRAM_BINS: usize = 40;

#[derive(Debug, Parser)]
#[command(name = "fisher-dim", version, about = "Intrinsic dimension from Fisher separability")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the intrinsic dimension of a matrix file.
    Estimate(EstimateArgs),
    /// Print the unseparability profile over the alpha grid.
    Sweep(EstimateArgs),
    /// Generate a synthetic dataset.
    Synth(SynthArgs),
    /// Score FisherS and the correlation dimension on a dataset battery.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DelimiterArg {
    Auto,
    Comma,
    Tab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PointsIn {
    Rows,
    Columns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    /// Alpha grid as lo:hi:step [default: 0.6:0.98:0.02, benchmark 0.2:0.98:0.02]
    #[arg(long)]
    pub alphas: Option<String>,
    #[arg(long, default_value_t = 10.0)]
    pub condition_threshold: f64,
    /// Skip the projection onto the unit sphere.
    #[arg(long)]
    pub no_sphere: bool,
    #[arg(long, default_value_t = DEFAULT_BLOCK_SIZE)]
    pub block_size: usize,
    /// Worker threads [default: all cores]
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Write only tabular artifacts.
    #[arg(long)]
    pub no_svg: bool,
    /// Format of the summary printed to stdout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = DelimiterArg::Auto)]
    pub delimiter: DelimiterArg,
    /// Whether points are the rows or the columns of the file.
    #[arg(long, value_enum, default_value_t = PointsIn::Rows)]
    pub points_in: PointsIn,
    /// The first line is a header.
    #[arg(long)]
    pub header: bool,
    /// Treat the input as a genes x tumors mutation matrix: drop rare genes
    /// and scale each tumor by its mutation count.
    #[arg(long)]
    pub mutation_preprocess: bool,
    #[arg(long, default_value_t = crate::io::DEFAULT_MIN_COUNT)]
    pub min_count: usize,
    /// Recorded in the report; the estimate itself is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, required_unless_present = "config")]
    pub kind: Option<String>,
    /// Intrinsic dimension.
    #[arg(long = "n", default_value_t = 10)]
    pub n: usize,
    /// Number of points.
    #[arg(long = "N", default_value_t = 2500)]
    pub cardinality: usize,
    /// Ambient dimension [default: n + 1 for spheres, 13 for the curve, n otherwise]
    #[arg(long)]
    pub embed_dim: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0.1)]
    pub radius: f64,
    #[arg(long, default_value_t = 10)]
    pub clusters: usize,
    /// Fraction of points inside clusters.
    #[arg(long, default_value_t = 0.3)]
    pub fraction: f64,
    /// Apply a random rotation after embedding.
    #[arg(long)]
    pub rotate: bool,
    /// Dataset spec as JSON; replaces the shape flags.
    #[arg(long, conflicts_with_all = ["kind", "embed_dim", "rotate"])]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV [default: <out-dir>/<kind>_n<n>_N<N>_seed<seed>.csv]
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BenchmarkArgs {
    /// Battery as JSON; the standard battery is used when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Base seed of the standard battery.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `lo:hi:step`.
pub fn parse_alpha_range(s: &str) -> Result<AlphaGrid> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| FisherError::Usage(format!("--alphas expects lo:hi:step, got '{s}'")))?;
    match nums.as_slice() {
        [lo, hi, step] => AlphaGrid::from_range(*lo, *hi, *step).map_err(|e| FisherError::Usage(e.to_string())),
        _ => Err(FisherError::Usage(format!("--alphas expects lo:hi:step, got '{s}'"))),
    }
}

impl EngineArgs {
    fn estimator(&self, default_grid: AlphaGrid) -> Result<Estimator> {
        let grid = match &self.alphas {
            Some(s) => parse_alpha_range(s)?,
            None => default_grid,
        };
        if self.block_size == 0 {
            return Err(FisherError::Usage("--block-size must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(FisherError::Usage("--threads must be positive".into()));
        }
        let preprocess = PreprocessConfig {
            condition_threshold: self.condition_threshold,
            ..Default::default()
        };
        preprocess.validate().map_err(|e| FisherError::Usage(e.to_string()))?;
        let est = Estimator {
            preprocess,
            grid,
            kernel: KernelConfig {
                block_size: self.block_size,
                threads: self.threads,
                require_sphere: true,
            },
        };
        Ok(if self.no_sphere { est.without_sphere() } else { est })
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("input")
        .to_string()
}

fn load_input(args: &EstimateArgs) -> Result<(DataMatrix, InputDescriptor)> {
    let delimiter = match args.delimiter {
        DelimiterArg::Auto => Delimiter::for_path(&args.input),
        DelimiterArg::Comma => Delimiter::Comma,
        DelimiterArg::Tab => Delimiter::Tab,
    };
    let orientation = match args.points_in {
        PointsIn::Rows => Orientation::Rows,
        PointsIn::Columns => Orientation::Columns,
    };
    let file = MatrixFile {
        path: args.input.clone(),
        delimiter,
        orientation,
        header: args.header,
    };
    let raw = load_matrix(&file)?;
    let (x, mutation) = if args.mutation_preprocess {
        let norm = normalize_mutation_matrix(&raw, args.min_count)?;
        if !norm.dropped_tumors.is_empty() {
            eprintln!(
                "warning: dropped {} tumor column(s) with no mutations after gene filtering",
                norm.dropped_tumors.len()
            );
        }
        let summary = norm.summary(raw.n_points(), raw.n_features(), args.min_count);
        (norm.matrix, Some(summary))
    } else {
        (raw, None)
    };
    let desc = InputDescriptor {
        source: args.input.display().to_string(),
        delimiter: Some(delimiter),
        orientation,
        header: args.header,
        n_points: x.n_points(),
        n_features: x.n_features(),
        mutation,
    };
    Ok((x, desc))
}

fn sweep_rows(profiles: &[SeparabilityProfile]) -> Vec<Vec<String>> {
    profiles
        .iter()
        .map(|p| vec![p.alpha.to_string(), p.mean_prob.to_string(), fmt_opt(p.dimension)])
        .collect()
}

fn write_sweep_csv(path: &Path, profiles: &[SeparabilityProfile]) -> Result<()> {
    write_table(fs::File::create(path)?, &["alpha", "mean_prob", "n_alpha"], &sweep_rows(profiles))
}

fn sweep_svg(profiles: &[SeparabilityProfile]) -> String {
    let pts: Vec<(f64, f64)> = profiles.iter().map(|p| (p.alpha, p.mean_prob)).collect();
    svg::sweep_svg(&pts, &REFERENCE_DIMS)
}

fn sweep_text(profiles: &[SeparabilityProfile]) -> String {
    let mut s = format!("{:>8} {:>14} {:>10}\n", "alpha", "mean_prob", "n_alpha");
    for p in profiles {
        let n = p.dimension.map_or("-".to_string(), |d| format!("{d:.4}"));
        s.push_str(&format!("{:>8.4} {:>14.6e} {:>10}\n", p.alpha, p.mean_prob, n));
    }
    s
}

fn run_estimate(args: &EstimateArgs, out: &mut dyn Write) -> Result<()> {
    let start = Instant::now();
    let estimator = args.engine.estimator(AlphaGrid::default())?;
    let (x, input) = load_input(args)?;
    let t0 = Instant::now();
    let cloud = preprocess(&x, &estimator.preprocess)?;
    let preprocess_seconds = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let result = estimator.estimate_cloud(cloud)?;
    let timing = Timing {
        preprocess_seconds,
        sweep_seconds: t1.elapsed().as_secs_f64(),
        total_seconds: start.elapsed().as_secs_f64(),
    };
    let report = RunReport::new(input, &estimator, &result, vec![args.seed], timing);

    let dir = &args.output.out_dir;
    ensure_dir(dir)?;
    let name = stem(&args.input);
    report.save(&dir.join(format!("{name}_report.json")))?;
    let used = result.estimate.profile_used();
    let point_rows: Vec<Vec<String>> = used
        .point_probs
        .iter()
        .enumerate()
        .map(|(i, p)| vec![i.to_string(), p.to_string()])
        .collect();
    write_table(
        fs::File::create(dir.join(format!("{name}_points.csv")))?,
        &["point", "p_alpha"],
        &point_rows,
    )?;
    let profiles = &result.estimate.profiles;
    write_sweep_csv(&dir.join(format!("{name}_sweep.csv")), profiles)?;
    if !args.output.no_svg {
        fs::write(
            dir.join(format!("{name}_histogram.svg")),
            svg::histogram_svg(&used.point_probs, HISTOGRAM_BINS, used.alpha),
        )?;
        fs::write(dir.join(format!("{name}_sweep.svg")), sweep_svg(profiles))?;
    }

    match args.output.format {
        Format::Json => writeln!(out, "{}", report.to_json()?)?,
        Format::Csv => write_table(&mut *out, &["alpha", "mean_prob", "n_alpha"], &sweep_rows(profiles))?,
        Format::Text => {
            writeln!(out, "input: {} ({} points x {} features)", report.input.source, x.n_points(), x.n_features())?;
            if let Some(m) = &report.input.mutation {
                writeln!(
                    out,
                    "mutation preprocessing: kept {} of {} genes (min count {}), dropped {} tumors",
                    m.genes_kept,
                    m.genes_in,
                    m.min_count,
                    m.dropped_tumors.len()
                )?;
            }
            writeln!(
                out,
                "retained components: {} (condition threshold {})",
                report.preprocessing.k, report.preprocessing.condition_threshold
            )?;
            writeln!(out, "alpha_max: {}  alpha_used: {}{}", report.alpha_max, report.alpha_used,
                if report.used_fallback { " (fallback)" } else { "" })?;
            writeln!(out, "n_hat: {:.4}", report.n_hat)?;
        }
    }
    Ok(())
}

fn run_sweep(args: &EstimateArgs, out: &mut dyn Write) -> Result<()> {
    let estimator = args.engine.estimator(AlphaGrid::default())?;
    let (x, _) = load_input(args)?;
    let cloud = preprocess(&x, &estimator.preprocess)?;
    let profiles = alpha_sweep_with(&cloud, &estimator.grid, &estimator.kernel)?;
    let dir = &args.output.out_dir;
    ensure_dir(dir)?;
    let name = stem(&args.input);
    write_sweep_csv(&dir.join(format!("{name}_sweep.csv")), &profiles)?;
    if !args.output.no_svg {
        fs::write(dir.join(format!("{name}_sweep.svg")), sweep_svg(&profiles))?;
    }
    match args.output.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&profiles)?)?,
        Format::Csv => write_table(&mut *out, &["alpha", "mean_prob", "n_alpha"], &sweep_rows(&profiles))?,
        Format::Text => {
            writeln!(out, "retained components: {}", cloud.k)?;
            write!(out, "{}", sweep_text(&profiles))?;
        }
    }
    Ok(())
}

/// Spec described by the `synth` flags.
pub fn synth_spec(args: &SynthArgs) -> Result<SyntheticSpec> {
    let spec = if let Some(path) = &args.config {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| FisherError::Spec(format!("{}: {e}", path.display())))?
    } else {
        let kind: ManifoldKind = args.kind.as_deref().unwrap_or_default().parse()?;
        let base = match kind {
            ManifoldKind::Sphere => SyntheticSpec::sphere(args.n, args.cardinality, args.seed),
            ManifoldKind::Cube => SyntheticSpec::cube(args.n, args.n, args.cardinality, args.seed),
            ManifoldKind::Curve => SyntheticSpec::curve(13, args.cardinality, args.seed),
            ManifoldKind::Clustered => {
                let mut s = SyntheticSpec::clustered(args.n, args.radius, args.cardinality, args.seed)
                    .with_fraction(args.fraction);
                s.cluster_count = args.clusters;
                s
            }
        };
        let base = match args.embed_dim {
            Some(d) => base.with_embed_dim(d),
            None => base,
        };
        base.with_noise(args.noise).with_rotation(args.rotate)
    };
    spec.validate()?;
    Ok(spec)
}

fn kind_name(k: ManifoldKind) -> &'static str {
    match k {
        ManifoldKind::Sphere => "sphere",
        ManifoldKind::Cube => "cube",
        ManifoldKind::Curve => "curve",
        ManifoldKind::Clustered => "clustered",
    }
}

/// Sidecar path for a dataset: `data.csv` -> `data.spec.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("spec.json")
}

fn run_synth(args: &SynthArgs, out: &mut dyn Write) -> Result<()> {
    let spec = synth_spec(args)?;
    let x = generate(&spec)?;
    let path = match &args.out {
        Some(p) => p.clone(),
        None => args.out_dir.join(format!(
            "{}_n{}_N{}_seed{}.csv",
            kind_name(spec.kind),
            spec.intrinsic_dim,
            spec.cardinality,
            spec.seed
        )),
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    save_matrix_csv(&x, &path)?;
    fs::write(sidecar_path(&path), serde_json::to_string_pretty(&spec)? + "\n")?;
    writeln!(out, "wrote {} ({} x {})", path.display(), x.n_points(), x.n_features())?;
    Ok(())
}

/// Benchmark table rows with the columns
/// `dataset, cardinality, N, n, FisherS, retained_k, CD`.
pub fn benchmark_table(report: &BenchmarkReport) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let header = vec!["dataset", "cardinality", "N", "n", "FisherS", "retained_k", "CD"];
    let rows = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.cardinality.to_string(),
                r.embed_dim.to_string(),
                r.true_dim.to_string(),
                fmt_opt(r.fisher),
                r.retained_k.map(|k| k.to_string()).unwrap_or_default(),
                fmt_opt(r.cd),
            ]
        })
        .collect();
    (header, rows)
}

fn run_benchmark(args: &BenchmarkArgs, out: &mut dyn Write) -> Result<()> {
    let estimator = args.engine.estimator(battery_grid())?;
    let battery = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str::<Battery>(&text)
                .map_err(|e| FisherError::Spec(format!("{}: {e}", path.display())))?
        }
        None => Battery::standard(args.seed),
    };
    let cd = CorrelationConfig {
        seed: args.seed,
        threads: args.engine.threads,
        ..Default::default()
    };
    let report = run_battery(&battery, &estimator, &cd)?;
    for r in report.rows.iter().filter(|r| !r.errors.is_empty()) {
        eprintln!("warning: {}: {}", r.name, r.errors.join("; "));
    }
    let dir = &args.output.out_dir;
    ensure_dir(dir)?;
    let (header, rows) = benchmark_table(&report);
    write_table(fs::File::create(dir.join("benchmark.csv"))?, &header, &rows)?;
    fs::write(dir.join("benchmark.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    match args.output.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        Format::Csv => write_table(&mut *out, &header, &rows)?,
        Format::Text => {
            writeln!(out, "{:<12} {:>6} {:>4} {:>4} {:>9} {:>4} {:>9}", "dataset", "card", "N", "n", "FisherS", "k", "CD")?;
            for r in &report.rows {
                let f = r.fisher.map_or("-".into(), |v| format!("{v:.2}"));
                let k = r.retained_k.map_or("-".into(), |v| v.to_string());
                let c = r.cd.map_or("-".into(), |v| format!("{v:.2}"));
                writeln!(
                    out,
                    "{:<12} {:>6} {:>4} {:>4} {:>9} {:>4} {:>9}",
                    r.name, r.cardinality, r.embed_dim, r.true_dim, f, k, c
                )?;
            }
            for (name, e) in &report.mean_pct_error {
                writeln!(out, "mean % error {name}: {e:.2}")?;
            }
        }
    }
    Ok(())
}

/// Runs a parsed command, printing the summary to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Estimate(a) => run_estimate(a, out),
        Command::Sweep(a) => run_sweep(a, out),
        Command::Synth(a) => run_synth(a, out),
        Command::Benchmark(a) => run_benchmark(a, out),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
