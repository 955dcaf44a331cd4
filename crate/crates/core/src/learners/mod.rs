//! Single-label nominal classifiers.
//!
//! Every learner is trained on a [`SingleLabelView`]: a set of rows, a list of
//! feature columns and one nominal target. The fitted [`TrainedLearner`] reads
//! only its own feature columns from full-width rows, so a caller can pass the
//! same row to learners built on different column subsets.

mod gaussian;
mod hoeffding;
mod knn;
mod naive_bayes;
mod ripper;
mod zero_r;

use serde::{Deserialize, Serialize};

use crate::dataset::{AttributeKind, AttributeSchema, Cell, Instance, MultiLabelDataset};
use crate::error::{Error, Result};

pub use self::hoeffding::{hoeffding_bound, HoeffdingParams, HoeffdingTree, LeafStrategy};
pub use self::knn::Knn;
pub use self::naive_bayes::NaiveBayes;
pub use self::ripper::{foil_gain, prune_value, Condition, Operator, Ripper, RipperParams, Rule};
pub use self::zero_r::ZeroR;

/// Seed used when the caller does not choose one.
pub const DEFAULT_SEED: u64 = 1;

/// A feature column as seen by a fitted learner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    /// Column index in the full-width row.
    pub column: usize,
    /// Category count for nominal features, `None` for numeric ones.
    pub arity: Option<u32>,
}

impl FeatureSpec {
    pub fn is_numeric(&self) -> bool {
        self.arity.is_none()
    }
}

/// Rows, feature columns and a nominal target for one single-label problem.
#[derive(Clone, Debug)]
pub struct SingleLabelView<'a> {
    instances: &'a [Instance],
    width: usize,
    features: Vec<FeatureSpec>,
    targets: Vec<u32>,
    classes: Vec<String>,
}

impl<'a> SingleLabelView<'a> {
    /// `targets[i]` is the class of `instances[i]`. The target may have a
    /// single class (a label-powerset problem with one observed labelset).
    pub fn new(
        schema: &AttributeSchema,
        instances: &'a [Instance],
        feature_columns: &[usize],
        targets: Vec<u32>,
        classes: Vec<String>,
    ) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Training("target has no classes".into()));
        }
        if targets.len() != instances.len() {
            return Err(Error::Training(format!(
                "{} targets for {} instances",
                targets.len(),
                instances.len()
            )));
        }
        if let Some(t) = targets.iter().find(|t| **t as usize >= classes.len()) {
            return Err(Error::Training(format!(
                "target {t} outside {} classes",
                classes.len()
            )));
        }
        let features = feature_columns
            .iter()
            .map(|&c| {
                if c >= schema.len() {
                    return Err(Error::Training(format!("feature column {c} out of range")));
                }
                Ok(FeatureSpec {
                    column: c,
                    arity: match &schema.attribute(c).kind {
                        AttributeKind::Nominal(cats) => Some(cats.len() as u32),
                        AttributeKind::Numeric => None,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SingleLabelView {
            instances,
            width: schema.len(),
            features,
            targets,
            classes,
        })
    }

    /// View for label `j` of `ds`: features are all non-label columns followed
    /// by `extra_label_columns`.
    pub fn for_label(
        ds: &'a MultiLabelDataset,
        j: usize,
        extra_label_columns: &[usize],
    ) -> Result<Self> {
        let schema = ds.schema();
        let mut cols = schema.feature_indices();
        cols.extend_from_slice(extra_label_columns);
        let targets = (0..ds.len()).map(|i| ds.label(i, j) as u32).collect();
        SingleLabelView::new(
            schema,
            ds.instances(),
            &cols,
            targets,
            crate::dataset::LABEL_CATEGORIES
                .iter()
                .map(|s| s.to_string())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn row(&self, i: usize) -> &[Cell] {
        self.instances[i].values()
    }

    pub fn target(&self, i: usize) -> u32 {
        self.targets[i]
    }

    pub fn targets(&self) -> &[u32] {
        &self.targets
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub(crate) fn class_counts(&self) -> Vec<f64> {
        let mut counts = vec![0.0; self.classes.len()];
        for &t in &self.targets {
            counts[t as usize] += 1.0;
        }
        counts
    }
}

/// Which learner to train, with its hyperparameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LearnerSpec {
    ZeroR,
    NaiveBayes,
    Knn { k: usize },
    HoeffdingTree(HoeffdingParams),
    Ripper(RipperParams),
}

impl LearnerSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            LearnerSpec::Knn { k } if *k == 0 => Err(Error::Config("kNN needs k >= 1".into())),
            LearnerSpec::HoeffdingTree(p) => p.validate(),
            LearnerSpec::Ripper(p) => p.validate(),
            _ => Ok(()),
        }
    }

    /// Short display name, e.g. `KNN(5)` or `JRip`.
    pub fn short_name(&self) -> String {
        match self {
            LearnerSpec::ZeroR => "ZeroR".into(),
            LearnerSpec::NaiveBayes => "NaiveBayes".into(),
            LearnerSpec::Knn { k } => format!("KNN({k})"),
            LearnerSpec::HoeffdingTree(_) => "HoeffdingTree".into(),
            LearnerSpec::Ripper(_) => "JRip".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FittedModel {
    ZeroR(ZeroR),
    NaiveBayes(NaiveBayes),
    Knn(Knn),
    HoeffdingTree(HoeffdingTree),
    Ripper(Ripper),
}

/// A fitted single-label classifier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedLearner {
    spec: LearnerSpec,
    classes: Vec<String>,
    features: Vec<FeatureSpec>,
    input_width: usize,
    model: FittedModel,
}

/// Trains the learner described by `spec`. `seed` drives every random choice.
pub fn train(view: &SingleLabelView<'_>, spec: &LearnerSpec, seed: u64) -> Result<TrainedLearner> {
    spec.validate()?;
    if view.is_empty() {
        return Err(Error::Training("cannot train on an empty view".into()));
    }
    let model = match spec {
        LearnerSpec::ZeroR => FittedModel::ZeroR(ZeroR::fit(view)?),
        LearnerSpec::NaiveBayes => FittedModel::NaiveBayes(NaiveBayes::fit(view)?),
        LearnerSpec::Knn { k } => FittedModel::Knn(Knn::fit(view, *k)?),
        LearnerSpec::HoeffdingTree(p) => FittedModel::HoeffdingTree(HoeffdingTree::fit(view, p)?),
        LearnerSpec::Ripper(p) => FittedModel::Ripper(Ripper::fit(view, p, seed)?),
    };
    Ok(TrainedLearner {
        spec: spec.clone(),
        classes: view.classes().to_vec(),
        features: view.features().to_vec(),
        input_width: view.width(),
        model,
    })
}

pub fn train_zero_r(view: &SingleLabelView<'_>) -> Result<TrainedLearner> {
    train(view, &LearnerSpec::ZeroR, DEFAULT_SEED)
}

pub fn train_naive_bayes(view: &SingleLabelView<'_>) -> Result<TrainedLearner> {
    train(view, &LearnerSpec::NaiveBayes, DEFAULT_SEED)
}

pub fn train_knn(view: &SingleLabelView<'_>, k: usize) -> Result<TrainedLearner> {
    train(view, &LearnerSpec::Knn { k }, DEFAULT_SEED)
}

pub fn train_hoeffding(
    view: &SingleLabelView<'_>,
    params: &HoeffdingParams,
) -> Result<TrainedLearner> {
    train(
        view,
        &LearnerSpec::HoeffdingTree(params.clone()),
        DEFAULT_SEED,
    )
}

pub fn train_ripper(
    view: &SingleLabelView<'_>,
    params: &RipperParams,
    seed: u64,
) -> Result<TrainedLearner> {
    train(view, &LearnerSpec::Ripper(params.clone()), seed)
}

impl TrainedLearner {
    pub fn spec(&self) -> &LearnerSpec {
        &self.spec
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn model(&self) -> &FittedModel {
        &self.model
    }

    /// Class probabilities for a full-width row.
    pub fn predict_distribution(&self, row: &[Cell]) -> Result<Vec<f64>> {
        if row.len() != self.input_width {
            return Err(Error::Prediction(format!(
                "row has {} values, model expects {}",
                row.len(),
                self.input_width
            )));
        }
        for f in &self.features {
            let ok = match (row[f.column], f.arity) {
                (Cell::Missing, _) => true,
                (Cell::Category(c), Some(a)) => c < a,
                (Cell::Numeric(v), None) => v.is_finite(),
                _ => false,
            };
            if !ok {
                return Err(Error::Prediction(format!(
                    "value {:?} in column {} does not match the training schema",
                    row[f.column], f.column
                )));
            }
        }
        let features = &self.features;
        let dist = match &self.model {
            FittedModel::ZeroR(m) => m.distribution(),
            FittedModel::NaiveBayes(m) => m.distribution(features, row),
            FittedModel::Knn(m) => m.distribution(features, row),
            FittedModel::HoeffdingTree(m) => m.distribution(features, row),
            FittedModel::Ripper(m) => m.distribution(features, row),
        };
        debug_assert_eq!(dist.len(), self.classes.len());
        Ok(dist)
    }

    /// Most probable class; ties go to the lowest class index.
    pub fn predict(&self, row: &[Cell]) -> Result<u32> {
        Ok(argmax(&self.predict_distribution(row)?) as u32)
    }
}

/// Index of the largest value, lowest index on ties.
pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate().skip(1) {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// Scales to unit sum; an all-zero vector becomes uniform.
pub(crate) fn normalize(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    if sum > 0.0 && sum.is_finite() {
        for x in v.iter_mut() {
            *x /= sum;
        }
    } else {
        let u = 1.0 / v.len() as f64;
        v.iter_mut().for_each(|x| *x = u);
    }
}
