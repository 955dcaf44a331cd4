//! `mll`: preprocess data, run experiment grids, train and apply models.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use mll_core::dataset::{parse_csv, preprocess_diabetes, write_arff, DEFAULT_MISSING_MARKER};
use mll_core::eval::{
    load_dataset, parse_tsv, read_dataset, render_tables, run_grid, tsv_header, tsv_row,
    ExperimentConfig,
};
use mll_core::multilabel::{predict_batch, train, ModelSpec};
use mll_core::par::Execution;
use mll_core::persist::PersistedModel;
use serde::Deserialize;

const EXIT_RUNTIME: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PARTIAL: u8 = 3;
const EXIT_SCHEMA: u8 = 4;

#[derive(Parser)]
#[command(
    name = "mll",
    version,
    about = "Multi-label classification experiments"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides the seed of the model (train) or of every stage's evaluation (experiment).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn the raw diabetes encounter CSV into a seven-label ARFF file.
    Preprocess {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run every cell of an experiment grid and write TSV results and tables.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: `output_dir` from the config).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Train one model and save it as JSON.
    Train {
        #[arg(long)]
        config: PathBuf,
        /// Dataset (default: `dataset` from the config).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Apply a saved model to a dataset.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Bipartition threshold (default: the model's).
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Rebuild the text tables from a results TSV.
    Report {
        #[arg(long)]
        input: PathBuf,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<mll_core::Error> for Failure {
    fn from(e: mll_core::Error) -> Self {
        use mll_core::Error as E;
        let code = match e {
            E::SchemaMismatch { .. } => EXIT_SCHEMA,
            E::Config(_) | E::Parse { .. } | E::Range(_) | E::Format(_) => EXIT_USAGE,
            _ => EXIT_RUNTIME,
        };
        Failure {
            code,
            err: e.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure {
            code: EXIT_RUNTIME,
            err,
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn usage(err: anyhow::Error) -> Failure {
    Failure {
        code: EXIT_USAGE,
        err,
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(usage)
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn config_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn preprocess(input: &Path, output: &Path) -> CmdResult {
    let text = read_input(input)?;
    let raw = parse_csv(text.as_bytes(), &[], DEFAULT_MISSING_MARKER)
        .map_err(|e| Failure::from(e).context(input))?;
    let (ds, report) = preprocess_diabetes(&raw)?;
    let mut out = create(output)?;
    write_arff(&ds, &mut out)?;
    out.flush()?;
    let report_path = output.with_extension("report");
    fs::write(&report_path, report.to_key_value())
        .with_context(|| format!("cannot write {}", report_path.display()))?;
    println!(
        "{} rows in, {} dropped (missing race), {} dropped (invalid gender), {} rows out, {} attributes",
        report.rows_in,
        report.rows_dropped_missing_race,
        report.rows_dropped_invalid_gender,
        report.rows_out,
        report.attributes_out
    );
    println!("wrote {} and {}", output.display(), report_path.display());
    Ok(0)
}

fn experiment(
    config: &Path,
    output: Option<&Path>,
    seed: Option<u64>,
    exec: Execution,
) -> CmdResult {
    let text = read_input(config)?;
    let mut cfg =
        ExperimentConfig::from_toml(&text).map_err(|e| Failure::from(e).context(config))?;
    if let Some(s) = seed {
        cfg.stages.iter_mut().for_each(|st| st.evaluation.seed = s);
    }
    let base = config_dir(config);
    let ds = load_dataset(&cfg, &base)?;
    let out_dir = match output {
        Some(p) => p.to_path_buf(),
        None if cfg.output_dir.is_absolute() => cfg.output_dir.clone(),
        None => base.join(&cfg.output_dir),
    };
    log::info!(
        "{}: {} instances, {} labels, {} grid cells",
        ds.name(),
        ds.len(),
        ds.label_count(),
        cfg.cell_count()
    );

    let tsv_path = out_dir.join("results.tsv");
    let mut tsv = create(&tsv_path)?;
    let labels = ds.schema().label_names();
    writeln!(tsv, "{}", tsv_header(&labels)).context("writing results")?;
    tsv.flush().context("writing results")?;
    let mut write_err = None;
    let result = run_grid(&cfg, &ds, exec, |row| {
        log::info!(
            "{} {} {} {}",
            row.stage,
            row.sample_size,
            row.model,
            row.evaluation
        );
        let res = writeln!(tsv, "{}", tsv_row(row, labels.len())).and_then(|_| tsv.flush());
        if let (Err(e), None) = (res, &write_err) {
            write_err = Some(e);
        }
    })?;
    if let Some(e) = write_err {
        return Err(anyhow!(e)
            .context(format!("writing {}", tsv_path.display()))
            .into());
    }

    let tables = render_tables(&result);
    let tables_path = out_dir.join("tables.txt");
    fs::write(&tables_path, &tables)
        .with_context(|| format!("cannot write {}", tables_path.display()))?;
    print!("{tables}");
    let failed = result.failed();
    println!("wrote {} and {}", tsv_path.display(), tables_path.display());
    if failed > 0 {
        eprintln!("{failed} of {} cells failed", result.rows.len());
        return Ok(EXIT_PARTIAL);
    }
    Ok(0)
}

/// Model training settings: a dataset and one model.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TrainConfig {
    #[serde(default)]
    dataset: Option<PathBuf>,
    #[serde(default)]
    label_count: Option<usize>,
    #[serde(default)]
    labels: Vec<String>,
    model: ModelSpec,
}

fn train_cmd(
    config: &Path,
    input: Option<&Path>,
    output: &Path,
    seed: Option<u64>,
    exec: Execution,
) -> CmdResult {
    let text = read_input(config)?;
    let mut cfg: TrainConfig = toml::from_str(&text)
        .with_context(|| format!("{}", config.display()))
        .map_err(usage)?;
    if let Some(s) = seed {
        cfg.model.seed = s;
    }
    cfg.model.validate()?;
    let data_path = match (input, &cfg.dataset) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) if p.is_absolute() => p.clone(),
        (None, Some(p)) => config_dir(config).join(p),
        (None, None) => return Err(usage(anyhow!("no dataset: pass --input or set `dataset`"))),
    };
    let ds = read_dataset(&data_path, cfg.label_count, &cfg.labels)?;
    let model = train(&ds, &cfg.model, exec)?;
    let saved = PersistedModel::new(cfg.model.name(), ds.schema(), model);
    let mut out = create(output)?;
    saved.write(&mut out)?;
    out.flush()?;
    println!(
        "trained {} on {} instances, wrote {}",
        saved.name,
        ds.len(),
        output.display()
    );
    Ok(0)
}

fn predict_cmd(
    model: &Path,
    input: &Path,
    output: &Path,
    threshold: Option<f64>,
    exec: Execution,
) -> CmdResult {
    let text = read_input(model)?;
    let saved = PersistedModel::from_json(&text).map_err(|e| Failure::from(e).context(model))?;
    // ARFF files may declare their own label count; otherwise assume the model's.
    let data_text = read_input(input)?;
    let k =
        mll_core::dataset::declared_label_count(&data_text).unwrap_or(saved.schema.label_count());
    let ds = read_dataset(input, Some(k), &saved.schema.label_names())?;
    saved
        .check_schema(ds.schema())
        .map_err(|e| Failure::from(e).context(input))?;
    let t = threshold.unwrap_or(saved.model.threshold());
    let predictions = predict_batch(&saved.model, ds.instances(), t, exec)?;

    let mut out = create(output)?;
    let labels = saved.model.label_names();
    let mut header: Vec<String> = labels.iter().map(|l| format!("confidence.{l}")).collect();
    header.extend(labels.iter().map(|l| format!("relevant.{l}")));
    header.extend(labels.iter().map(|l| format!("rank.{l}")));
    writeln!(out, "{}", header.join("\t"))?;
    for p in &predictions {
        let mut cols: Vec<String> = p.confidences.iter().map(|c| c.to_string()).collect();
        cols.extend(p.bipartition.iter().map(|&b| (b as u8).to_string()));
        cols.extend(p.ranking.iter().map(|r| r.to_string()));
        writeln!(out, "{}", cols.join("\t"))?;
    }
    out.flush()?;
    println!(
        "wrote {} predictions to {}",
        predictions.len(),
        output.display()
    );
    Ok(0)
}

fn report(input: &Path, output: Option<&Path>) -> CmdResult {
    let text = read_input(input)?;
    let result = parse_tsv(&text).map_err(|e| Failure::from(e).context(input))?;
    let tables = render_tables(&result);
    match output {
        Some(p) => {
            fs::write(p, &tables).with_context(|| format!("cannot write {}", p.display()))?
        }
        None => print!("{tables}"),
    }
    Ok(0)
}

impl Failure {
    fn context(self, path: &Path) -> Self {
        Failure {
            code: self.code,
            err: self.err.context(path.display().to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn run(cli: Cli) -> CmdResult {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage(anyhow!("--threads must be at least 1")));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let exec = Execution::default();
    match &cli.command {
        Command::Preprocess { input, output } => preprocess(input, output),
        Command::Experiment { config, output } => {
            experiment(config, output.as_deref(), cli.seed, exec)
        }
        Command::Train {
            config,
            input,
            output,
        } => train_cmd(config, input.as_deref(), output, cli.seed, exec),
        Command::Predict {
            model,
            input,
            output,
            threshold,
        } => predict_cmd(model, input, output, *threshold, exec),
        Command::Report { input, output } => report(input, output.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
