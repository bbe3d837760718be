use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use grn_cli::config::ExperimentConfig;
use grn_cli::figures::{
    aggregate_figures, write_degree_means, write_signal_boxstats, write_signal_means,
};
use grn_cli::runner::{read_csv, run_experiment, simulate_cell, write_csv};
use grn_core::search::{infer_network, ScheduleRounding, SearchConfig};
use grn_core::{ExpressionMatrix, Method, Topology};

#[derive(Parser)]
#[command(
    name = "grn",
    version,
    about = "Gene regulatory network inference toolkit: synthetic benchmarks, simulation and search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a ground-truth network and a simulated expression matrix
    Gen(GenArgs),
    /// Infer a network from an expression matrix file
    Infer(InferArgs),
    /// Run a benchmark sweep and write the raw result table
    Bench(BenchArgs),
    /// Aggregate a result table into plot-ready figure tables
    Report(ReportArgs),
}

fn parse_topology(s: &str) -> Result<Topology, String> {
    Topology::from_str(s).map_err(|e| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::from_str(s).map_err(|e| e.to_string())
}

fn parse_rounding(s: &str) -> Result<ScheduleRounding, String> {
    match s.to_ascii_lowercase().as_str() {
        "floor" => Ok(ScheduleRounding::Floor),
        "round" => Ok(ScheduleRounding::Round),
        other => Err(format!("unknown rounding `{other}` (expected floor or round)")),
    }
}

#[derive(Args)]
struct GenArgs {
    /// Topology model: ER, BA or WS
    #[arg(long, value_parser = parse_topology)]
    topology: Topology,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Target average in-degree
    #[arg(long, default_value_t = 2.0)]
    avg_k: f64,
    /// WS rewiring probability (ignored by ER and BA)
    #[arg(long, default_value_t = 0.1)]
    rewire_p: f64,
    /// Number of observed time points
    #[arg(long, default_value_t = 50)]
    signal_size: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.98)]
    c1: f64,
    #[arg(long, default_value_t = 0.01)]
    c2: f64,
    #[arg(long, default_value_t = 0.01)]
    c3: f64,
    /// Predictor-less genes flip a fair coin each step
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    source_uniform: bool,
    /// Output path for the edge-list file
    #[arg(long)]
    net_out: PathBuf,
    /// Output path for the expression matrix file
    #[arg(long)]
    matrix_out: PathBuf,
}

#[derive(Args)]
struct InferArgs {
    /// Expression matrix file produced by `gen`
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_parser = parse_method, default_value = "SFFS-BA")]
    method: Method,
    #[arg(long, default_value_t = 2.5)]
    gamma: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    optimum_epsilon: f64,
    #[arg(long, default_value_t = 5)]
    max_cardinality: usize,
    #[arg(long, value_parser = parse_rounding, default_value = "floor")]
    rounding: ScheduleRounding,
    /// Comma-separated target gene indices (defaults to every gene)
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<usize>>,
    /// Output path for the inferred edge-list file
    #[arg(long)]
    net_out: PathBuf,
    /// Optional per-target summary CSV: target,predictors,cfv,rounds_active
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML sweep configuration; flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed of the sweep (required for reproducibility)
    #[arg(long)]
    seed: u64,
    /// Output path for the result CSV
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_parser = parse_topology, value_delimiter = ',')]
    topologies: Option<Vec<Topology>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    avg_k_values: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    signal_sizes: Option<Vec<usize>>,
    #[arg(long, value_parser = parse_method, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
    #[arg(long)]
    runs: Option<u64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    ws_rewire_p: Option<f64>,
    /// Print a per-cell line with the matrix checksum
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// Result CSV produced by `bench`
    #[arg(long)]
    results: PathBuf,
    /// Directory for the aggregate tables
    #[arg(long)]
    out_dir: PathBuf,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen(args) => gen(args),
        Command::Infer(args) => infer(args),
        Command::Bench(args) => bench(args),
        Command::Report(args) => report(args),
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| {
        format!("creating {}", path.display())
    })?))
}

fn gen(args: GenArgs) -> Result<()> {
    let cfg = ExperimentConfig {
        topologies: vec![args.topology],
        n: args.n,
        avg_k_values: vec![args.avg_k],
        signal_sizes: vec![args.signal_size],
        runs: 1,
        base_seed: args.seed,
        ws_rewire_p: args.rewire_p,
        c1: args.c1,
        c2: args.c2,
        c3: args.c3,
        source_uniform: args.source_uniform,
        ..ExperimentConfig::default()
    };
    cfg.validate()?;
    let (net, exps, cell) = simulate_cell(&cfg, args.topology, args.avg_k, args.signal_size, 0)?;
    net.write_to(&mut create(&args.net_out)?)?;
    exps.write_to(&mut create(&args.matrix_out)?)?;
    eprintln!(
        "generated {} network: n={} edges={} T={} cell_seed={}",
        args.topology,
        net.n(),
        net.edge_count(),
        exps.n_times(),
        cell
    );
    Ok(())
}

fn infer(args: InferArgs) -> Result<()> {
    let file = File::open(&args.matrix)
        .with_context(|| format!("opening {}", args.matrix.display()))?;
    let exps = ExpressionMatrix::read_from(BufReader::new(file))?;
    let cfg = SearchConfig {
        gamma: args.gamma,
        delta: args.delta,
        alpha: args.alpha,
        optimum_epsilon: args.optimum_epsilon,
        max_cardinality: args.max_cardinality,
        rounding: args.rounding,
    };
    let targets: Vec<usize> = match args.targets {
        Some(t) => t,
        None => (0..exps.n_genes()).collect(),
    };
    let inferred = infer_network(args.method, &targets, &exps, &cfg)?;
    inferred
        .to_network(exps.seed())?
        .write_to(&mut create(&args.net_out)?)?;
    if let Some(path) = &args.summary_out {
        let mut w = create(path)?;
        writeln!(w, "target,predictors,cfv,rounds_active")?;
        for r in &inferred.results {
            let preds = r
                .predictors
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(";");
            writeln!(w, "{},{},{:.6},{}", r.target, preds, r.cfv, r.rounds_active)?;
        }
    }
    eprintln!(
        "{} inferred {} edges over {} targets",
        args.method,
        inferred.edge_count(),
        inferred.results.len()
    );
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load_toml(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.base_seed = args.seed;
    if let Some(v) = args.topologies {
        cfg.topologies = v;
    }
    if let Some(v) = args.n {
        cfg.n = v;
    }
    if let Some(v) = args.avg_k_values {
        cfg.avg_k_values = v;
    }
    if let Some(v) = args.signal_sizes {
        cfg.signal_sizes = v;
    }
    if let Some(v) = args.methods {
        cfg.methods = v;
    }
    if let Some(v) = args.runs {
        cfg.runs = v;
    }
    if let Some(v) = args.gamma {
        cfg.gamma = v;
    }
    if let Some(v) = args.delta {
        cfg.delta = v;
    }
    if let Some(v) = args.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = args.ws_rewire_p {
        cfg.ws_rewire_p = v;
    }
    cfg.validate()?;
    let start = Instant::now();
    let records = run_experiment(&cfg)?;
    if args.verbose {
        let mut seen = std::collections::HashSet::new();
        for r in &records {
            if seen.insert(r.row.seed) {
                eprintln!(
                    "cell {} {} k={} T={} run={} matrix_checksum={:016x}",
                    r.row.topology, r.row.seed, r.row.avg_k, r.row.signal_size, r.run,
                    r.matrix_checksum
                );
            }
        }
    }
    let rows: Vec<_> = records.into_iter().map(|r| r.row).collect();
    write_csv(&rows, &mut create(&args.out)?)?;
    eprintln!(
        "wrote {} rows to {} in {:.1?}",
        rows.len(),
        args.out.display(),
        start.elapsed()
    );
    Ok(())
}

fn report(args: ReportArgs) -> Result<()> {
    let file = File::open(&args.results)
        .with_context(|| format!("opening {}", args.results.display()))?;
    let rows = read_csv(BufReader::new(file))?;
    let tables = aggregate_figures(&rows)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    write_signal_means(
        &tables.signal_means,
        &mut create(&args.out_dir.join("signal_means.csv"))?,
    )?;
    write_signal_boxstats(
        &tables.signal_boxstats,
        &mut create(&args.out_dir.join("signal_boxstats.csv"))?,
    )?;
    write_degree_means(
        &tables.degree_means,
        &mut create(&args.out_dir.join("degree_means.csv"))?,
    )?;
    eprintln!(
        "wrote {} signal rows, {} boxplot rows, {} degree rows to {}",
        tables.signal_means.len(),
        tables.signal_boxstats.len(),
        tables.degree_means.len(),
        args.out_dir.display()
    );
    Ok(())
}
