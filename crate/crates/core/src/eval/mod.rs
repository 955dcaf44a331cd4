//! Cross-validation, train/test evaluation and experiment grids.

mod grid;
mod report;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{split, MultiLabelDataset};
use crate::error::{Error, Result};
use crate::metrics::{EvalPairs, MetricReport, METRIC_NAMES};
use crate::multilabel::{self, predict_batch, MultiLabelModel};
use crate::par::{self, Execution};

pub use self::grid::{
    load_dataset, read_dataset, run_grid, Evaluation, EvaluationConfig, ExperimentConfig,
    GridResult, ResultRow, RowValues, StageConfig, Stat,
};
pub use self::report::{parse_tsv, render_tables, tsv_header, tsv_row, write_tsv};
pub use crate::multilabel::{ChainOrder, ModelSpec, Transform};

pub const DEFAULT_FOLDS: usize = 10;

/// How instances are dealt into folds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldStrategy {
    /// Plain shuffle.
    #[default]
    Random,
    /// Instances with the same labelset are spread evenly over the folds.
    Stratified,
}

/// Shuffles `0..n` with `seed` and deals it into `k` folds whose sizes
/// differ by at most one (the first `n % k` folds are larger). Each fold is
/// sorted ascending.
pub fn k_fold_indices(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    check_folds(n, k)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        let mut fold = order[start..start + size].to_vec();
        fold.sort_unstable();
        folds.push(fold);
        start += size;
    }
    Ok(folds)
}

/// Folds that keep each labelset's share roughly equal across folds. Sizes
/// still differ by at most one.
pub fn stratified_fold_indices(
    ds: &MultiLabelDataset,
    k: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    let n = ds.len();
    check_folds(n, k)?;
    let mut group_of: HashMap<Vec<bool>, usize> = HashMap::new();
    let groups: Vec<usize> = (0..n)
        .map(|i| {
            let next = group_of.len();
            *group_of.entry(ds.label_row(i)).or_insert(next)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order.sort_by_key(|&i| groups[i]);
    let mut folds = vec![Vec::new(); k];
    for (p, i) in order.into_iter().enumerate() {
        folds[p % k].push(i);
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

fn check_folds(n: usize, k: usize) -> Result<()> {
    if k < 2 || k > n {
        return Err(Error::Range(format!(
            "need 2 <= k <= n for k-fold, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

/// Mean and sample standard deviation (divisor `count - 1`) of a metric over
/// folds. NaN values are left out.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateStat {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

impl AggregateStat {
    pub fn from_values(values: &[f64]) -> Self {
        let v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
        let count = v.len();
        if count == 0 {
            return AggregateStat {
                mean: f64::NAN,
                std: f64::NAN,
                count: 0,
            };
        }
        let mean = v.iter().sum::<f64>() / count as f64;
        let std = if count < 2 {
            0.0
        } else {
            (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (count - 1) as f64).sqrt()
        };
        AggregateStat { mean, std, count }
    }
}

/// Aggregated measures in [`METRIC_NAMES`] order plus per-label accuracy.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateReport {
    pub metrics: Vec<(&'static str, AggregateStat)>,
    pub per_label_accuracy: Vec<AggregateStat>,
}

impl AggregateReport {
    pub fn from_reports(reports: &[MetricReport]) -> Self {
        let metrics = METRIC_NAMES
            .iter()
            .map(|&m| {
                let values: Vec<f64> = reports
                    .iter()
                    .map(|r| r.get(m).expect("known name"))
                    .collect();
                (m, AggregateStat::from_values(&values))
            })
            .collect();
        let k = reports.first().map_or(0, |r| r.per_label_accuracy.len());
        let per_label_accuracy = (0..k)
            .map(|j| {
                AggregateStat::from_values(
                    &reports
                        .iter()
                        .map(|r| r.per_label_accuracy[j])
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        AggregateReport {
            metrics,
            per_label_accuracy,
        }
    }

    pub fn get(&self, name: &str) -> Option<AggregateStat> {
        self.metrics
            .iter()
            .find(|(m, _)| *m == name)
            .map(|(_, s)| *s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CvResult {
    pub folds: Vec<MetricReport>,
    pub aggregate: AggregateReport,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CvOptions {
    pub k: usize,
    pub seed: u64,
    pub folds: FoldStrategy,
    pub exec: Execution,
}

impl CvOptions {
    pub fn new(k: usize, seed: u64) -> Self {
        CvOptions {
            k,
            seed,
            folds: FoldStrategy::Random,
            exec: Execution::default(),
        }
    }
}

/// Predicts every instance of `test` and scores the predictions.
pub fn evaluate(
    model: &MultiLabelModel,
    test: &MultiLabelDataset,
    threshold: f64,
    exec: Execution,
) -> Result<MetricReport> {
    let predictions = predict_batch(model, test.instances(), threshold, exec)?;
    let mut pairs = EvalPairs::new(test.label_count());
    for (i, p) in predictions.iter().enumerate() {
        pairs.push_prediction(test.label_row(i), p)?;
    }
    MetricReport::evaluate(&pairs)
}

fn fit_and_score(
    train: &MultiLabelDataset,
    test: &MultiLabelDataset,
    spec: &ModelSpec,
    exec: Execution,
) -> Result<MetricReport> {
    let model = multilabel::train(train, spec, exec)?;
    evaluate(&model, test, spec.threshold, exec)
}

/// k-fold cross-validation with plain shuffled folds.
pub fn cross_validate(
    ds: &MultiLabelDataset,
    spec: &ModelSpec,
    k: usize,
    seed: u64,
) -> Result<CvResult> {
    cross_validate_with(ds, spec, &CvOptions::new(k, seed))
}

/// Trains on `k - 1` folds and evaluates on the held-out one, for every fold.
pub fn cross_validate_with(
    ds: &MultiLabelDataset,
    spec: &ModelSpec,
    opts: &CvOptions,
) -> Result<CvResult> {
    spec.validate()?;
    let folds = match opts.folds {
        FoldStrategy::Random => k_fold_indices(ds.len(), opts.k, opts.seed)?,
        FoldStrategy::Stratified => stratified_fold_indices(ds, opts.k, opts.seed)?,
    };
    let reports = par::try_map_range(opts.exec, folds.len(), |f| {
        // Training rows keep dataset order, which matters for stream learners.
        let mut train_rows: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|(g, _)| *g != f)
            .flat_map(|(_, rows)| rows.iter().copied())
            .collect();
        train_rows.sort_unstable();
        fit_and_score(
            &ds.subset(&train_rows),
            &ds.subset(&folds[f]),
            spec,
            opts.exec,
        )
        .map_err(|e| e.context(&format!("fold {f}")))
    })?;
    Ok(CvResult {
        aggregate: AggregateReport::from_reports(&reports),
        folds: reports,
    })
}

/// One train/evaluate pass on a seeded split.
pub fn train_test_eval(
    ds: &MultiLabelDataset,
    spec: &ModelSpec,
    fraction: f64,
    seed: u64,
) -> Result<MetricReport> {
    train_test_eval_with(ds, spec, fraction, seed, Execution::default())
}

pub fn train_test_eval_with(
    ds: &MultiLabelDataset,
    spec: &ModelSpec,
    fraction: f64,
    seed: u64,
    exec: Execution,
) -> Result<MetricReport> {
    spec.validate()?;
    let (train, test) = split(ds, fraction, seed)?;
    fit_and_score(&train, &test, spec, exec)
}
