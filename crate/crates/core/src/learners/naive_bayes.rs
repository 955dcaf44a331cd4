use serde::{Deserialize, Serialize};

use super::gaussian::GaussianStats;
use super::{normalize, FeatureSpec, SingleLabelView};
use crate::dataset::Cell;
use crate::error::Result;

/// Laplace pseudo-count for priors and nominal likelihoods.
const ALPHA: f64 = 1.0;

/// Naive Bayes over mixed features: Laplace-smoothed frequency tables for
/// nominal features, one Gaussian per class for numeric ones. Missing cells
/// are left out of both the counts and the posterior product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayes {
    log_priors: Vec<f64>,
    features: Vec<FeatureModel>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
enum FeatureModel {
    /// `log_likelihood[class][category]`
    Nominal {
        log_likelihood: Vec<Vec<f64>>,
    },
    Numeric {
        per_class: Vec<GaussianStats>,
    },
    /// Numeric feature with no observed values.
    Unused,
}

impl NaiveBayes {
    pub(crate) fn fit(view: &SingleLabelView<'_>) -> Result<Self> {
        let n_classes = view.class_count();
        let counts = view.class_counts();
        let n = view.len() as f64;
        let log_priors = counts
            .iter()
            .map(|c| ((c + ALPHA) / (n + ALPHA * n_classes as f64)).ln())
            .collect();

        let features = view
            .features()
            .iter()
            .map(|f| match f.arity {
                Some(arity) => {
                    let arity = arity as usize;
                    let mut table = vec![vec![0.0; arity]; n_classes];
                    for i in 0..view.len() {
                        if let Cell::Category(v) = view.row(i)[f.column] {
                            table[view.target(i) as usize][v as usize] += 1.0;
                        }
                    }
                    let log_likelihood = table
                        .into_iter()
                        .map(|row| {
                            let total: f64 = row.iter().sum();
                            row.iter()
                                .map(|c| ((c + ALPHA) / (total + ALPHA * arity as f64)).ln())
                                .collect()
                        })
                        .collect();
                    FeatureModel::Nominal { log_likelihood }
                }
                None => {
                    let mut per_class = vec![GaussianStats::default(); n_classes];
                    for i in 0..view.len() {
                        if let Cell::Numeric(x) = view.row(i)[f.column] {
                            per_class[view.target(i) as usize].add(x);
                        }
                    }
                    let mut pooled = GaussianStats::default();
                    per_class.iter().for_each(|g| pooled.merge(g));
                    if pooled.n == 0.0 {
                        FeatureModel::Unused
                    } else {
                        for g in per_class.iter_mut().filter(|g| g.n == 0.0) {
                            *g = pooled.clone();
                        }
                        FeatureModel::Numeric { per_class }
                    }
                }
            })
            .collect();
        Ok(NaiveBayes {
            log_priors,
            features,
        })
    }

    pub(crate) fn distribution(&self, specs: &[FeatureSpec], row: &[Cell]) -> Vec<f64> {
        let mut log_post = self.log_priors.clone();
        for (model, spec) in self.features.iter().zip(specs) {
            match (model, row[spec.column]) {
                (FeatureModel::Nominal { log_likelihood }, Cell::Category(v)) => {
                    for (c, lp) in log_post.iter_mut().enumerate() {
                        *lp += log_likelihood[c][v as usize];
                    }
                }
                (FeatureModel::Numeric { per_class }, Cell::Numeric(x)) => {
                    for (c, lp) in log_post.iter_mut().enumerate() {
                        *lp += per_class[c].log_density(x);
                    }
                }
                _ => {}
            }
        }
        let max = log_post.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut dist: Vec<f64> = log_post.iter().map(|lp| (lp - max).exp()).collect();
        normalize(&mut dist);
        dist
    }
}
