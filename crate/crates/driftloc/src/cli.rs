//! The `driftloc` command line: `localize`, `bench` and `sweep`.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use driftloc_core::eval::{
    bootstrap_sweep, roc_auc_masked, run_experiment, run_method, split_size_sweep, ExperimentConfig, Method,
};
use serde_json::json;

use crate::config::BenchConfig;
use crate::csv_io::load_embedding_csv;
use crate::error::{CliError, CliResult};
use crate::grid::{parse_count_grid, parse_grid};
use crate::manifest::RunManifest;
use crate::methods::{MethodName, MethodParams};
use crate::report::{
    boxplot_svg, curve_svg, write_curve_csv, write_file, write_localization_csv, write_results_csv, write_summary_csv,
};

#[derive(Debug, Parser)]
#[command(name = "driftloc", version, about = "Locate drifting samples between time windows of embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every sample of an embedding CSV
    Localize(LocalizeArgs),
    /// Run repeated experiments for the methods of a config file
    Bench(BenchArgs),
    /// Trace AUC against the bootstrap count or the training split size
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct LocalizeArgs {
    /// Embedding CSV with columns t, optional drift, f0..f{d-1}
    #[arg(long)]
    pub input: PathBuf,
    /// Localization method
    #[arg(long, value_enum)]
    pub method: MethodName,
    /// Seed for bootstraps, training and permutations
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV; the manifest is written next to it as <out>.manifest.json
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads, 0 for all cores; results do not depend on it
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub params: MethodParams,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// INI config with [data], [experiment] and [method NAME] sections
    #[arg(long)]
    pub config: PathBuf,
    /// Master seed; every data and method seed derives from it
    #[arg(long)]
    pub seed: u64,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads, 0 for all cores; results do not depend on it
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Also write boxplot.svg
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Bootstraps,
    Splitsize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub kind: SweepKind,
    /// INI config with [data], [experiment] and [method NAME] sections
    #[arg(long)]
    pub config: PathBuf,
    /// "10,25,50,100" or "0.2..0.9 step 0.1"
    #[arg(long)]
    pub grid: String,
    /// Master seed; every data and method seed derives from it
    #[arg(long)]
    pub seed: u64,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
    /// Method label from the config; defaults to the first method
    #[arg(long)]
    pub method: Option<String>,
    /// Worker threads, 0 for all cores; results do not depend on it
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

/// Parses `argv` (program name first) and runs the command; returns the
/// process exit code.
pub fn main_with_args(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli, &argv[1.min(argv.len())..]) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, argv: &[String]) -> CliResult<()> {
    let jobs = match &cli.command {
        Command::Localize(a) => a.jobs,
        Command::Bench(a) => a.jobs,
        Command::Sweep(a) => a.jobs,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Localize(a) => localize(a, argv),
        Command::Bench(a) => bench(a, argv),
        Command::Sweep(a) => sweep(a, argv),
    })
}

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn localize(a: &LocalizeArgs, argv: &[String]) -> CliResult<()> {
    let table = load_embedding_csv(&a.input)?;
    let result = run_method(&a.params.method(a.method), &table.dataset, a.seed)?;
    if let Some(i) = result.values.iter().position(|v| !v.is_finite()) {
        return Err(CliError::Numerical(format!("sample {i} received a non-finite value")));
    }
    write_file(&a.out, |w| write_localization_csv(w, &result))?;

    let config = json!({ "input": a.input, "method": a.method, "params": a.params });
    let mut manifest = RunManifest::new("localize", argv, a.seed, a.jobs, config);
    manifest.outputs.push(file_name(&a.out));
    let auc = table
        .truth
        .as_ref()
        .map(|t| roc_auc_masked(&result.values, &t.is_drifting, result.orientation, Some(&result.assigned)).ok());
    manifest.results = json!({ "n_samples": result.len(), "n_assigned": result.n_assigned(), "auc": auc.flatten() });
    let mut path = a.out.clone().into_os_string();
    path.push(".manifest.json");
    manifest.save(Path::new(&path))
}

fn bench(a: &BenchArgs, argv: &[String]) -> CliResult<()> {
    let config = BenchConfig::load(&a.config)?;
    let data = config.data.source()?;
    create_dir(&a.out)?;
    let mut tables = Vec::new();
    let mut manifest = RunManifest::new("bench", argv, a.seed, a.jobs, json!(config));
    for m in &config.methods {
        let exp = ExperimentConfig {
            method: m.params.method(m.method),
            data: data.clone(),
            n_repetitions: config.repetitions,
            seed: a.seed,
        };
        let table = run_experiment(&exp)?;
        let name = format!("{}.csv", m.label);
        write_file(&a.out.join(&name), |w| write_results_csv(w, &table))?;
        manifest.outputs.push(name);
        tables.push((m.label.clone(), table));
    }
    write_file(&a.out.join("summary.csv"), |w| write_summary_csv(w, &tables))?;
    manifest.outputs.push("summary.csv".into());
    if a.svg {
        let groups: Vec<(String, Vec<f64>)> = tables.iter().map(|(l, t)| (l.clone(), t.aucs())).collect();
        let path = a.out.join("boxplot.svg");
        std::fs::write(&path, boxplot_svg(&groups)).map_err(|e| CliError::Io(path.clone(), e))?;
        manifest.outputs.push("boxplot.svg".into());
    }
    manifest.save(&a.out.join("manifest.json"))
}

fn sweep(a: &SweepArgs, argv: &[String]) -> CliResult<()> {
    let config = BenchConfig::load(&a.config)?;
    let entry = match &a.method {
        Some(label) => config.methods.iter().find(|m| &m.label == label).ok_or_else(|| {
            let labels: Vec<&str> = config.methods.iter().map(|m| m.label.as_str()).collect();
            CliError::Usage(format!("no method labelled {label:?} in config, found {}", labels.join(", ")))
        })?,
        None => &config.methods[0],
    };
    let method = entry.params.method(entry.method);
    let allowed = match a.kind {
        SweepKind::Bootstraps => matches!(method, Method::Cp { .. }),
        SweepKind::Splitsize => matches!(method, Method::Cp { .. } | Method::SplitCp { .. }),
    };
    if !allowed {
        return Err(CliError::Usage(format!(
            "method {:?} ({}) cannot be swept over {}",
            entry.label,
            entry.method.as_str(),
            if a.kind == SweepKind::Bootstraps {
                "bootstraps; use cp-dt or cp-mlp"
            } else {
                "split size; use cp-dt, cp-mlp or split-cp"
            }
        )));
    }
    let exp = ExperimentConfig { method, data: config.data.source()?, n_repetitions: config.repetitions, seed: a.seed };
    let (points, x_label, grid) = match a.kind {
        SweepKind::Bootstraps => {
            let grid = parse_count_grid(&a.grid).map_err(CliError::Usage)?;
            (bootstrap_sweep(&exp, &grid)?, "bootstraps", json!(grid))
        }
        SweepKind::Splitsize => {
            let grid = parse_grid(&a.grid).map_err(CliError::Usage)?;
            (split_size_sweep(&exp, &grid)?, "training fraction", json!(grid))
        }
    };
    create_dir(&a.out)?;
    write_file(&a.out.join("curve.csv"), |w| write_curve_csv(w, &points))?;
    let svg_path = a.out.join("curve.svg");
    std::fs::write(&svg_path, curve_svg(&points, x_label)).map_err(|e| CliError::Io(svg_path.clone(), e))?;
    let resolved = json!({
        "kind": a.kind.to_possible_value().map(|v| v.get_name().to_string()),
        "grid": grid,
        "method": entry,
        "data": config.data,
        "repetitions": config.repetitions,
    });
    let mut manifest = RunManifest::new("sweep", argv, a.seed, a.jobs, resolved);
    manifest.outputs = vec!["curve.csv".into(), "curve.svg".into()];
    manifest.save(&a.out.join("manifest.json"))
}
