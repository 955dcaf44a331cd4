use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{cross_validate_with, train_test_eval_with, CvOptions, FoldStrategy, ModelSpec};
use crate::dataset::{
    declared_label_count, parse_arff, parse_csv, sample, MultiLabelDataset, SampleStrategy,
};
use crate::error::{Error, Result};
use crate::metrics::{MetricReport, METRIC_NAMES};
use crate::par::Execution;

/// A whole experiment: one dataset and one or more stages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// ARFF or CSV file; relative paths are resolved against the config file.
    pub dataset: PathBuf,
    /// Label count for ARFF input; taken from the relation's `-C k` if absent.
    #[serde(default)]
    pub label_count: Option<usize>,
    /// Label column names for CSV input.
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(rename = "stage")]
    pub stages: Vec<StageConfig>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageConfig {
    pub name: String,
    #[serde(default = "default_sample_sizes")]
    pub sample_sizes: Vec<usize>,
    #[serde(default = "default_sampling")]
    pub sampling: SampleStrategy,
    pub evaluation: EvaluationConfig,
    pub models: Vec<ModelSpec>,
}

fn default_sample_sizes() -> Vec<usize> {
    vec![1000, 10_000, 20_000]
}

fn default_sampling() -> SampleStrategy {
    SampleStrategy::First
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationConfig {
    /// Training fraction of a single train/test split.
    #[serde(default)]
    pub train_test: Option<f64>,
    /// Number of cross-validation folds.
    #[serde(default)]
    pub k_fold: Option<usize>,
    #[serde(default = "default_eval_seed")]
    pub seed: u64,
    #[serde(default)]
    pub folds: FoldStrategy,
}

fn default_eval_seed() -> u64 {
    1
}

/// One evaluation method of a grid cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Evaluation {
    TrainTest { fraction: f64 },
    KFold { k: usize },
}

impl Evaluation {
    pub fn label(&self) -> String {
        match self {
            Evaluation::TrainTest { fraction } => format!("split {fraction}"),
            Evaluation::KFold { k } => format!("cv {k}"),
        }
    }
}

impl EvaluationConfig {
    pub fn methods(&self) -> Vec<Evaluation> {
        let mut m = Vec::new();
        if let Some(fraction) = self.train_test {
            m.push(Evaluation::TrainTest { fraction });
        }
        if let Some(k) = self.k_fold {
            m.push(Evaluation::KFold { k });
        }
        m
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::Config("no [[stage]] tables".into()));
        }
        for s in &self.stages {
            let at = |m: String| Error::Config(format!("stage '{}': {m}", s.name));
            if s.models.is_empty() {
                return Err(at("empty model list".into()));
            }
            if s.sample_sizes.is_empty() || s.sample_sizes.contains(&0) {
                return Err(at(
                    "sample_sizes must be a nonempty list of positive sizes".into()
                ));
            }
            let e = &s.evaluation;
            if e.methods().is_empty() {
                return Err(at("evaluation needs train_test and/or k_fold".into()));
            }
            if let Some(f) = e.train_test {
                if !(f > 0.0 && f < 1.0) {
                    return Err(at(format!("train_test fraction {f} not in (0,1)")));
                }
            }
            if let Some(k) = e.k_fold {
                if k < 2 {
                    return Err(at(format!("k_fold {k} must be >= 2")));
                }
            }
            for m in &s.models {
                m.validate()
                    .map_err(|err| at(format!("model {}: {err}", m.name())))?;
            }
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.stages
            .iter()
            .map(|s| s.sample_sizes.len() * s.models.len() * s.evaluation.methods().len())
            .sum()
    }
}

/// Reads the configured dataset. `base` is the directory relative paths are
/// resolved against.
pub fn load_dataset(cfg: &ExperimentConfig, base: &Path) -> Result<MultiLabelDataset> {
    let path = if cfg.dataset.is_absolute() {
        cfg.dataset.clone()
    } else {
        base.join(&cfg.dataset)
    };
    read_dataset(&path, cfg.label_count, &cfg.labels)
}

/// Reads an ARFF file (label count given or taken from a `-C k` suffix) or a
/// CSV file with the named label columns and `?` for missing cells.
pub fn read_dataset(
    path: &Path,
    label_count: Option<usize>,
    labels: &[String],
) -> Result<MultiLabelDataset> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    match ext.as_str() {
        "arff" => {
            let k = label_count
                .or_else(|| declared_label_count(&text))
                .ok_or_else(|| {
                    Error::Config(format!(
                        "{}: set label_count or a -C suffix",
                        path.display()
                    ))
                })?;
            parse_arff(text.as_bytes(), k)
        }
        "csv" => {
            if labels.is_empty() {
                return Err(Error::Config("CSV datasets need a `labels` list".into()));
            }
            let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
            parse_csv(
                text.as_bytes(),
                &labels,
                crate::dataset::DEFAULT_MISSING_MARKER,
            )
        }
        _ => Err(Error::Config(format!(
            "{}: expected a .arff or .csv file",
            path.display()
        ))),
    }
}

/// A value with an optional spread.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: Option<f64>,
}

/// Measures of one grid cell in [`METRIC_NAMES`] order plus per-label accuracy.
#[derive(Clone, Debug, PartialEq)]
pub struct RowValues {
    pub metrics: Vec<Stat>,
    pub per_label_accuracy: Vec<Stat>,
}

impl RowValues {
    fn from_report(r: &MetricReport) -> Self {
        RowValues {
            metrics: METRIC_NAMES
                .iter()
                .map(|m| Stat {
                    mean: r.get(m).expect("known name"),
                    std: None,
                })
                .collect(),
            per_label_accuracy: r
                .per_label_accuracy
                .iter()
                .map(|&mean| Stat { mean, std: None })
                .collect(),
        }
    }

    fn from_aggregate(a: &super::AggregateReport) -> Self {
        RowValues {
            metrics: a
                .metrics
                .iter()
                .map(|(_, s)| Stat {
                    mean: s.mean,
                    std: Some(s.std),
                })
                .collect(),
            per_label_accuracy: a
                .per_label_accuracy
                .iter()
                .map(|s| Stat {
                    mean: s.mean,
                    std: Some(s.std),
                })
                .collect(),
        }
    }

    pub fn metric(&self, name: &str) -> Option<Stat> {
        METRIC_NAMES
            .iter()
            .position(|m| *m == name)
            .map(|i| self.metrics[i])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub stage: String,
    pub sample_size: usize,
    pub model: String,
    pub evaluation: String,
    /// Measures, or the error message of a failed cell.
    pub outcome: std::result::Result<RowValues, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridResult {
    pub label_names: Vec<String>,
    pub rows: Vec<ResultRow>,
}

impl GridResult {
    pub fn failed(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }
}

/// Runs every (stage, sample size, model, evaluation) cell in config order.
/// `on_row` sees each row as soon as it is finished. Failed cells become
/// failed rows; only problems with the config itself abort the run.
pub fn run_grid(
    cfg: &ExperimentConfig,
    ds: &MultiLabelDataset,
    exec: Execution,
    mut on_row: impl FnMut(&ResultRow),
) -> Result<GridResult> {
    cfg.validate()?;
    for s in &cfg.stages {
        if let Some(&n) = s.sample_sizes.iter().find(|&&n| n > ds.len()) {
            return Err(Error::Config(format!(
                "stage '{}': sample size {n} exceeds the {} available instances",
                s.name,
                ds.len()
            )));
        }
    }
    let mut rows = Vec::with_capacity(cfg.cell_count());
    for stage in &cfg.stages {
        for &n in &stage.sample_sizes {
            let data = sample(ds, n, stage.sampling)?;
            for spec in &stage.models {
                for method in stage.evaluation.methods() {
                    let e = &stage.evaluation;
                    let outcome = match method {
                        Evaluation::TrainTest { fraction } => {
                            train_test_eval_with(&data, spec, fraction, e.seed, exec)
                                .map(|r| RowValues::from_report(&r))
                        }
                        Evaluation::KFold { k } => {
                            let opts = CvOptions {
                                k,
                                seed: e.seed,
                                folds: e.folds,
                                exec,
                            };
                            cross_validate_with(&data, spec, &opts)
                                .map(|r| RowValues::from_aggregate(&r.aggregate))
                        }
                    };
                    let row = ResultRow {
                        stage: stage.name.clone(),
                        sample_size: n,
                        model: spec.name(),
                        evaluation: method.label(),
                        outcome: outcome.map_err(|err| {
                            log::warn!(
                                "{} on {} ({}) failed: {err}",
                                spec.name(),
                                n,
                                method.label()
                            );
                            err.to_string()
                        }),
                    };
                    on_row(&row);
                    rows.push(row);
                }
            }
        }
    }
    Ok(GridResult {
        label_names: ds.schema().label_names(),
        rows,
    })
}
