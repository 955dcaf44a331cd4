//! Multi-label evaluation measures.
//!
//! `Y` is the true label set of an instance, `Z` the predicted one, and `r` the
//! predicted ranking with rank 1 on top.

use crate::error::{Error, Result};
use crate::multilabel::MultiLabelPrediction;

/// True sets, predicted sets and rankings of `n` instances over `k` labels.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalPairs {
    k: usize,
    truth: Vec<Vec<bool>>,
    predicted: Vec<Vec<bool>>,
    rankings: Vec<Vec<usize>>,
}

impl EvalPairs {
    pub fn new(k: usize) -> Self {
        EvalPairs {
            k,
            ..Default::default()
        }
    }

    /// Adds one instance. `ranking[j]` is the rank of label `j` and must be a
    /// permutation of `1..=k`.
    pub fn push(
        &mut self,
        truth: Vec<bool>,
        predicted: Vec<bool>,
        ranking: Vec<usize>,
    ) -> Result<()> {
        if truth.len() != self.k || predicted.len() != self.k || ranking.len() != self.k {
            return Err(Error::Evaluation(format!(
                "instance has {}/{}/{} entries, expected {}",
                truth.len(),
                predicted.len(),
                ranking.len(),
                self.k
            )));
        }
        let mut seen = vec![false; self.k];
        for &r in &ranking {
            if r == 0 || r > self.k || std::mem::replace(&mut seen[r - 1], true) {
                return Err(Error::Evaluation(format!(
                    "ranking {ranking:?} is not a permutation of 1..={}",
                    self.k
                )));
            }
        }
        self.truth.push(truth);
        self.predicted.push(predicted);
        self.rankings.push(ranking);
        Ok(())
    }

    pub fn push_prediction(&mut self, truth: Vec<bool>, p: &MultiLabelPrediction) -> Result<()> {
        self.push(truth, p.bipartition.clone(), p.ranking.clone())
    }

    pub fn label_count(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.truth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truth.is_empty()
    }

    fn require_instances(&self) -> Result<f64> {
        if self.truth.is_empty() {
            return Err(Error::Evaluation("no instances to evaluate".into()));
        }
        Ok(self.truth.len() as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactMatch {
    pub exact_match: f64,
    pub zero_one_loss: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExampleBased {
    pub precision: f64,
    pub recall: f64,
    pub accuracy: f64,
    pub f1_example: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hamming {
    pub hamming_loss: f64,
    pub hamming_score: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankingMetrics {
    pub one_error: f64,
    pub ranking_loss: f64,
    pub coverage: f64,
}

pub fn exact_match(pairs: &EvalPairs) -> Result<ExactMatch> {
    let n = pairs.require_instances()?;
    let hits = pairs
        .truth
        .iter()
        .zip(&pairs.predicted)
        .filter(|(y, z)| y == z)
        .count() as f64;
    let exact_match = hits / n;
    Ok(ExactMatch {
        exact_match,
        zero_one_loss: 1.0 - exact_match,
    })
}

/// Ratio with the empty-set convention: both sets empty gives 1, a zero
/// denominator otherwise gives 0.
fn ratio(num: usize, den: usize, both_empty: bool) -> f64 {
    if both_empty {
        1.0
    } else if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn example_based(pairs: &EvalPairs) -> Result<ExampleBased> {
    let n = pairs.require_instances()?;
    let (mut p, mut r, mut a, mut f) = (0.0, 0.0, 0.0, 0.0);
    for (y, z) in pairs.truth.iter().zip(&pairs.predicted) {
        let inter = y.iter().zip(z).filter(|(a, b)| **a && **b).count();
        let union = y.iter().zip(z).filter(|(a, b)| **a || **b).count();
        let ny = y.iter().filter(|b| **b).count();
        let nz = z.iter().filter(|b| **b).count();
        let empty = ny == 0 && nz == 0;
        p += ratio(inter, nz, empty);
        r += ratio(inter, ny, empty);
        a += ratio(inter, union, empty);
        f += ratio(2 * inter, ny + nz, empty);
    }
    Ok(ExampleBased {
        precision: p / n,
        recall: r / n,
        accuracy: a / n,
        f1_example: f / n,
    })
}

pub fn hamming(pairs: &EvalPairs) -> Result<Hamming> {
    let n = pairs.require_instances()?;
    let wrong: usize = pairs
        .truth
        .iter()
        .zip(&pairs.predicted)
        .map(|(y, z)| y.iter().zip(z).filter(|(a, b)| a != b).count())
        .sum();
    let hamming_loss = if pairs.k == 0 {
        0.0
    } else {
        wrong as f64 / (n * pairs.k as f64)
    };
    Ok(Hamming {
        hamming_loss,
        hamming_score: 1.0 - hamming_loss,
    })
}

/// Fraction of instances whose top-ranked label is not relevant.
pub fn one_error(pairs: &EvalPairs) -> Result<f64> {
    let n = pairs.require_instances()?;
    let errors = pairs
        .truth
        .iter()
        .zip(&pairs.rankings)
        .filter(|(y, r)| match r.iter().position(|&x| x == 1) {
            Some(top) => !y[top],
            None => true,
        })
        .count();
    Ok(errors as f64 / n)
}

/// Average fraction of (relevant, irrelevant) label pairs ranked the wrong
/// way round. Instances with no relevant or no irrelevant label are skipped.
pub fn ranking_loss(pairs: &EvalPairs) -> Result<f64> {
    pairs.require_instances()?;
    let mut total = 0.0;
    let mut used = 0usize;
    for (y, r) in pairs.truth.iter().zip(&pairs.rankings) {
        let rel: Vec<usize> = (0..y.len()).filter(|&j| y[j]).collect();
        let irr: Vec<usize> = (0..y.len()).filter(|&j| !y[j]).collect();
        if rel.is_empty() || irr.is_empty() {
            continue;
        }
        let bad = rel
            .iter()
            .flat_map(|&a| irr.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| r[a] > r[b])
            .count();
        total += bad as f64 / (rel.len() * irr.len()) as f64;
        used += 1;
    }
    if used == 0 {
        return Err(Error::Evaluation(
            "ranking loss undefined: every instance has all or no labels relevant".into(),
        ));
    }
    Ok(total / used as f64)
}

/// Average depth, minus one, needed to reach every relevant label. Instances
/// with no relevant label are skipped.
pub fn coverage(pairs: &EvalPairs) -> Result<f64> {
    pairs.require_instances()?;
    let mut total = 0.0;
    let mut used = 0usize;
    for (y, r) in pairs.truth.iter().zip(&pairs.rankings) {
        if let Some(deepest) = (0..y.len()).filter(|&j| y[j]).map(|j| r[j]).max() {
            total += (deepest - 1) as f64;
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::Evaluation(
            "coverage undefined: no instance has a relevant label".into(),
        ));
    }
    Ok(total / used as f64)
}

pub fn ranking_metrics(pairs: &EvalPairs) -> Result<RankingMetrics> {
    Ok(RankingMetrics {
        one_error: one_error(pairs)?,
        ranking_loss: ranking_loss(pairs)?,
        coverage: coverage(pairs)?,
    })
}

/// Entry `j` is the fraction of instances where label `j` is predicted right.
pub fn per_label_accuracy(pairs: &EvalPairs) -> Result<Vec<f64>> {
    let n = pairs.require_instances()?;
    Ok((0..pairs.k)
        .map(|j| {
            let right = pairs
                .truth
                .iter()
                .zip(&pairs.predicted)
                .filter(|(y, z)| y[j] == z[j])
                .count();
            right as f64 / n
        })
        .collect())
}

/// Per-label confusion counts `(tp, fp, fn, tn)`.
fn confusion(pairs: &EvalPairs, j: usize) -> (usize, usize, usize, usize) {
    let mut c = (0, 0, 0, 0);
    for (y, z) in pairs.truth.iter().zip(&pairs.predicted) {
        match (y[j], z[j]) {
            (true, true) => c.0 += 1,
            (false, true) => c.1 += 1,
            (true, false) => c.2 += 1,
            (false, false) => c.3 += 1,
        }
    }
    c
}

/// `2TP / (2TP + FP + FN)` over all label decisions; 0 if nothing is positive.
pub fn f1_micro(pairs: &EvalPairs) -> Result<f64> {
    pairs.require_instances()?;
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for j in 0..pairs.k {
        let c = confusion(pairs, j);
        tp += c.0;
        fp += c.1;
        fn_ += c.2;
    }
    let den = 2 * tp + fp + fn_;
    Ok(if den == 0 {
        0.0
    } else {
        (2 * tp) as f64 / den as f64
    })
}

/// Mean over labels of the harmonic mean of the true positive and true
/// negative rates; a label where either rate is undefined or zero scores 0.
pub fn harmonic_score(pairs: &EvalPairs) -> Result<f64> {
    pairs.require_instances()?;
    if pairs.k == 0 {
        return Ok(0.0);
    }
    let total: f64 = (0..pairs.k)
        .map(|j| {
            let (tp, fp, fn_, tn) = confusion(pairs, j);
            if tp + fn_ == 0 || tn + fp == 0 {
                return 0.0;
            }
            let tpr = tp as f64 / (tp + fn_) as f64;
            let tnr = tn as f64 / (tn + fp) as f64;
            if tpr + tnr == 0.0 {
                0.0
            } else {
                2.0 * tpr * tnr / (tpr + tnr)
            }
        })
        .sum();
    Ok(total / pairs.k as f64)
}

/// Every measure for one evaluation. Ranking loss and coverage are NaN when
/// no instance qualifies for them.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    pub exact_match: f64,
    pub zero_one_loss: f64,
    pub precision: f64,
    pub recall: f64,
    pub accuracy: f64,
    pub f1_example: f64,
    pub hamming_loss: f64,
    pub hamming_score: f64,
    pub one_error: f64,
    pub ranking_loss: f64,
    pub coverage: f64,
    pub f1_micro: f64,
    pub harmonic_score: f64,
    pub per_label_accuracy: Vec<f64>,
}

/// Scalar measures in report order.
pub const METRIC_NAMES: [&str; 13] = [
    "accuracy",
    "exact_match",
    "hamming_score",
    "harmonic_score",
    "f1_micro",
    "ranking_loss",
    "one_error",
    "hamming_loss",
    "zero_one_loss",
    "precision",
    "recall",
    "f1_example",
    "coverage",
];

impl MetricReport {
    pub fn evaluate(pairs: &EvalPairs) -> Result<Self> {
        let em = exact_match(pairs)?;
        let eb = example_based(pairs)?;
        let h = hamming(pairs)?;
        Ok(MetricReport {
            exact_match: em.exact_match,
            zero_one_loss: em.zero_one_loss,
            precision: eb.precision,
            recall: eb.recall,
            accuracy: eb.accuracy,
            f1_example: eb.f1_example,
            hamming_loss: h.hamming_loss,
            hamming_score: h.hamming_score,
            one_error: one_error(pairs)?,
            ranking_loss: ranking_loss(pairs).unwrap_or(f64::NAN),
            coverage: coverage(pairs).unwrap_or(f64::NAN),
            f1_micro: f1_micro(pairs)?,
            harmonic_score: harmonic_score(pairs)?,
            per_label_accuracy: per_label_accuracy(pairs)?,
        })
    }

    /// Value of a scalar measure by name.
    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "accuracy" => self.accuracy,
            "exact_match" => self.exact_match,
            "hamming_score" => self.hamming_score,
            "harmonic_score" => self.harmonic_score,
            "f1_micro" => self.f1_micro,
            "ranking_loss" => self.ranking_loss,
            "one_error" => self.one_error,
            "hamming_loss" => self.hamming_loss,
            "zero_one_loss" => self.zero_one_loss,
            "precision" => self.precision,
            "recall" => self.recall,
            "f1_example" => self.f1_example,
            "coverage" => self.coverage,
            _ => return None,
        })
    }

    /// Scalars in [`METRIC_NAMES`] order.
    pub fn scalars(&self) -> Vec<(&'static str, f64)> {
        METRIC_NAMES
            .iter()
            .map(|&m| (m, self.get(m).expect("known name")))
            .collect()
    }

    /// Flat `key=value` lines; per-label accuracies are keyed
    /// `label_accuracy.<name>`.
    pub fn to_key_value(&self, label_names: &[String]) -> String {
        let mut out = String::new();
        for (k, v) in self.scalars() {
            out.push_str(&format!("{k}={v}\n"));
        }
        for (j, v) in self.per_label_accuracy.iter().enumerate() {
            let name = label_names.get(j).cloned().unwrap_or_else(|| j.to_string());
            out.push_str(&format!("label_accuracy.{name}={v}\n"));
        }
        out
    }
}
