//! Problem-transformation meta-learners: binary relevance, classifier chains,
//! Bayesian classifier chains and label powerset.

mod tree;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Cell, Instance, MultiLabelDataset};
use crate::error::{Error, Result};
use crate::learners::{self, LearnerSpec, SingleLabelView, TrainedLearner};
use crate::par::{self, Execution};

pub use self::tree::{build_dependency_tree, normalized_mutual_information, DependencyTree};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Br,
    Cc,
    Bcc,
    Lp,
}

impl Transform {
    pub fn short_name(self) -> &'static str {
        match self {
            Transform::Br => "BR",
            Transform::Cc => "CC",
            Transform::Bcc => "BCC",
            Transform::Lp => "LP",
        }
    }
}

/// Order in which a classifier chain visits the labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainOrder {
    #[default]
    LabelOrder,
    Random(u64),
    Explicit(Vec<usize>),
}

impl ChainOrder {
    pub fn resolve(&self, k: usize) -> Result<Vec<usize>> {
        match self {
            ChainOrder::LabelOrder => Ok((0..k).collect()),
            ChainOrder::Random(seed) => {
                let mut order: Vec<usize> = (0..k).collect();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
                Ok(order)
            }
            ChainOrder::Explicit(order) => {
                let mut sorted = order.clone();
                sorted.sort_unstable();
                if sorted != (0..k).collect::<Vec<_>>() {
                    return Err(Error::Config(format!(
                        "chain order {order:?} is not a permutation of 0..{k}"
                    )));
                }
                Ok(order.clone())
            }
        }
    }
}

/// A multi-label method: transformation, base learner and its settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub transform: Transform,
    pub base: LearnerSpec,
    #[serde(default)]
    pub chain_order: ChainOrder,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

fn default_seed() -> u64 {
    learners::DEFAULT_SEED
}

impl ModelSpec {
    pub fn new(transform: Transform, base: LearnerSpec) -> Self {
        ModelSpec {
            transform,
            base,
            chain_order: ChainOrder::default(),
            threshold: DEFAULT_THRESHOLD,
            seed: learners::DEFAULT_SEED,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::Config(format!(
                "threshold {} not in [0,1]",
                self.threshold
            )));
        }
        self.base.validate()
    }

    /// Display name such as `CC/JRip`.
    pub fn name(&self) -> String {
        format!("{}/{}", self.transform.short_name(), self.base.short_name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Br {
        learners: Vec<TrainedLearner>,
    },
    /// `learners[p]` predicts label `order[p]`.
    Cc {
        order: Vec<usize>,
        learners: Vec<TrainedLearner>,
    },
    /// `learners[j]` predicts label `j` from its tree parent.
    Bcc {
        tree: DependencyTree,
        learners: Vec<TrainedLearner>,
    },
    /// Class `c` of the learner stands for `labelsets[c]`.
    Lp {
        labelsets: Vec<Vec<bool>>,
        learner: TrainedLearner,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiLabelModel {
    label_names: Vec<String>,
    label_columns: Vec<usize>,
    input_width: usize,
    threshold: f64,
    kind: ModelKind,
}

/// Confidences, bipartition and ranking for one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiLabelPrediction {
    pub confidences: Vec<f64>,
    pub bipartition: Vec<bool>,
    /// `ranking[j]` is the rank of label `j`; 1 is the top.
    pub ranking: Vec<usize>,
}

impl MultiLabelPrediction {
    /// Thresholds the confidences and ranks them by descending confidence,
    /// ties by ascending label index.
    pub fn from_confidences(confidences: Vec<f64>, threshold: f64) -> Self {
        let bipartition = confidences.iter().map(|&c| c >= threshold).collect();
        MultiLabelPrediction {
            ranking: rank(&confidences),
            bipartition,
            confidences,
        }
    }
}

/// `rank(c)[j]` is the 1-based rank of `c[j]` in descending order; equal
/// values are ranked by ascending index.
pub fn rank(confidences: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..confidences.len()).collect();
    idx.sort_by(|&a, &b| confidences[b].total_cmp(&confidences[a]).then(a.cmp(&b)));
    let mut ranking = vec![0; confidences.len()];
    for (r, &j) in idx.iter().enumerate() {
        ranking[j] = r + 1;
    }
    ranking
}

/// One view per label: target label `j`, features every non-label column.
pub fn br_transform(ds: &MultiLabelDataset) -> Result<Vec<SingleLabelView<'_>>> {
    (0..ds.label_count())
        .map(|j| SingleLabelView::for_label(ds, j, &[]))
        .collect()
}

fn check_trainable(ds: &MultiLabelDataset) -> Result<()> {
    if ds.is_empty() {
        return Err(Error::Training("cannot train on an empty dataset".into()));
    }
    if ds.label_count() == 0 {
        return Err(Error::Training("dataset has no labels".into()));
    }
    Ok(())
}

fn train_label(
    ds: &MultiLabelDataset,
    j: usize,
    extra: &[usize],
    spec: &LearnerSpec,
    seed: u64,
) -> Result<TrainedLearner> {
    let name = &ds.schema().label_names()[j];
    SingleLabelView::for_label(ds, j, extra)
        .and_then(|v| learners::train(&v, spec, seed))
        .map_err(|e| e.context(&format!("label '{name}'")))
}

impl MultiLabelModel {
    fn assemble(ds: &MultiLabelDataset, threshold: f64, kind: ModelKind) -> Self {
        MultiLabelModel {
            label_names: ds.schema().label_names(),
            label_columns: ds.schema().label_indices().to_vec(),
            input_width: ds.schema().len(),
            threshold,
            kind,
        }
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn label_count(&self) -> usize {
        self.label_names.len()
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn input_width(&self) -> usize {
        self.input_width
    }
}

/// Binary relevance: one independent learner per label.
pub fn train_br(
    ds: &MultiLabelDataset,
    spec: &LearnerSpec,
    seed: u64,
    exec: Execution,
) -> Result<MultiLabelModel> {
    check_trainable(ds)?;
    let learners = par::try_map_range(exec, ds.label_count(), |j| {
        train_label(ds, j, &[], spec, seed)
    })?;
    Ok(MultiLabelModel::assemble(
        ds,
        DEFAULT_THRESHOLD,
        ModelKind::Br { learners },
    ))
}

/// Classifier chain: the learner at chain position `p` also sees the labels at
/// positions `0..p`, true values in training and predicted bits at prediction.
pub fn train_cc(
    ds: &MultiLabelDataset,
    spec: &LearnerSpec,
    order: &[usize],
    seed: u64,
    exec: Execution,
) -> Result<MultiLabelModel> {
    check_trainable(ds)?;
    let order = ChainOrder::Explicit(order.to_vec()).resolve(ds.label_count())?;
    let cols = ds.schema().label_indices();
    // With true labels as inputs the links do not depend on each other.
    let learners = par::try_map_range(exec, order.len(), |p| {
        let extra: Vec<usize> = order[..p].iter().map(|&j| cols[j]).collect();
        train_label(ds, order[p], &extra, spec, seed)
    })?;
    Ok(MultiLabelModel::assemble(
        ds,
        DEFAULT_THRESHOLD,
        ModelKind::Cc { order, learners },
    ))
}

/// Bayesian classifier chain: each label's learner sees its parent in the
/// label dependency tree.
pub fn train_bcc(
    ds: &MultiLabelDataset,
    spec: &LearnerSpec,
    seed: u64,
    exec: Execution,
) -> Result<MultiLabelModel> {
    check_trainable(ds)?;
    let tree = if ds.label_count() == 1 {
        DependencyTree::single()
    } else {
        build_dependency_tree(ds)?
    };
    let cols = ds.schema().label_indices();
    let learners = par::try_map_range(exec, ds.label_count(), |j| {
        let extra: Vec<usize> = tree.parent(j).map(|p| cols[p]).into_iter().collect();
        train_label(ds, j, &extra, spec, seed)
    })?;
    Ok(MultiLabelModel::assemble(
        ds,
        DEFAULT_THRESHOLD,
        ModelKind::Bcc { tree, learners },
    ))
}

/// Label powerset: each distinct training labelset is one class.
pub fn train_lp(ds: &MultiLabelDataset, spec: &LearnerSpec, seed: u64) -> Result<MultiLabelModel> {
    check_trainable(ds)?;
    let mut index: HashMap<Vec<bool>, u32> = HashMap::new();
    let mut labelsets = Vec::new();
    let mut targets = Vec::with_capacity(ds.len());
    for i in 0..ds.len() {
        let set = ds.label_row(i);
        let c = *index.entry(set.clone()).or_insert_with(|| {
            labelsets.push(set);
            (labelsets.len() - 1) as u32
        });
        targets.push(c);
    }
    let classes = labelsets
        .iter()
        .map(|s| s.iter().map(|&b| if b { '1' } else { '0' }).collect())
        .collect();
    let schema = ds.schema();
    let view = SingleLabelView::new(
        schema,
        ds.instances(),
        &schema.feature_indices(),
        targets,
        classes,
    )?;
    let learner = learners::train(&view, spec, seed).map_err(|e| e.context("labelset learner"))?;
    Ok(MultiLabelModel::assemble(
        ds,
        DEFAULT_THRESHOLD,
        ModelKind::Lp { labelsets, learner },
    ))
}

/// Trains the model described by `spec`.
pub fn train(ds: &MultiLabelDataset, spec: &ModelSpec, exec: Execution) -> Result<MultiLabelModel> {
    spec.validate()?;
    let mut model = match spec.transform {
        Transform::Br => train_br(ds, &spec.base, spec.seed, exec)?,
        Transform::Cc => {
            let order = spec.chain_order.resolve(ds.label_count())?;
            train_cc(ds, &spec.base, &order, spec.seed, exec)?
        }
        Transform::Bcc => train_bcc(ds, &spec.base, spec.seed, exec)?,
        Transform::Lp => train_lp(ds, &spec.base, spec.seed)?,
    };
    model.threshold = spec.threshold;
    Ok(model)
}

/// Probability that label `j`'s learner assigns to relevance.
fn relevance(learner: &TrainedLearner, row: &[Cell]) -> Result<f64> {
    Ok(learner.predict_distribution(row)?[1].clamp(0.0, 1.0))
}

/// Predicts one full-width row. Label columns of the row are ignored.
pub fn predict(
    model: &MultiLabelModel,
    row: &[Cell],
    threshold: f64,
) -> Result<MultiLabelPrediction> {
    if row.len() != model.input_width {
        return Err(Error::Prediction(format!(
            "row has {} values, model expects {}",
            row.len(),
            model.input_width
        )));
    }
    let k = model.label_count();
    let named = |j: usize| {
        let name = &model.label_names[j];
        move |e: Error| e.context(&format!("label '{name}'"))
    };
    match &model.kind {
        ModelKind::Br { learners } => {
            let confidences = (0..k)
                .map(|j| relevance(&learners[j], row).map_err(named(j)))
                .collect::<Result<Vec<_>>>()?;
            Ok(MultiLabelPrediction::from_confidences(
                confidences,
                threshold,
            ))
        }
        ModelKind::Cc { order, learners } => {
            let mut work = row.to_vec();
            let mut confidences = vec![0.0; k];
            for (p, &j) in order.iter().enumerate() {
                let c = relevance(&learners[p], &work).map_err(named(j))?;
                confidences[j] = c;
                work[model.label_columns[j]] = Cell::Category((c >= threshold) as u32);
            }
            Ok(MultiLabelPrediction::from_confidences(
                confidences,
                threshold,
            ))
        }
        ModelKind::Bcc { tree, learners } => {
            let mut work = row.to_vec();
            let mut confidences = vec![0.0; k];
            for &j in tree.topological_order() {
                let c = relevance(&learners[j], &work).map_err(named(j))?;
                confidences[j] = c;
                work[model.label_columns[j]] = Cell::Category((c >= threshold) as u32);
            }
            Ok(MultiLabelPrediction::from_confidences(
                confidences,
                threshold,
            ))
        }
        ModelKind::Lp { labelsets, learner } => {
            let dist = learner.predict_distribution(row)?;
            let mut confidences = vec![0.0; k];
            for (p, set) in dist.iter().zip(labelsets) {
                for (c, &on) in confidences.iter_mut().zip(set) {
                    if on {
                        *c += p;
                    }
                }
            }
            confidences.iter_mut().for_each(|c| *c = c.clamp(0.0, 1.0));
            let best = learners::argmax(&dist);
            Ok(MultiLabelPrediction {
                ranking: rank(&confidences),
                bipartition: labelsets[best].clone(),
                confidences,
            })
        }
    }
}

/// Predicts every instance, in order.
pub fn predict_batch(
    model: &MultiLabelModel,
    instances: &[Instance],
    threshold: f64,
    exec: Execution,
) -> Result<Vec<MultiLabelPrediction>> {
    par::try_map_range(exec, instances.len(), |i| {
        predict(model, instances[i].values(), threshold)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Attribute, AttributeSchema};
    use crate::learners::{HoeffdingParams, RipperParams};
    use proptest::prelude::*;
    use rand::Rng;

    /// `k` labels first, then a nominal and a numeric feature correlated with
    /// the labels.
    pub(crate) fn random_dataset(k: usize, n: usize, seed: u64) -> MultiLabelDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut attrs: Vec<Attribute> = (0..k)
            .map(|j| Attribute::binary_label(format!("l{j}")))
            .collect();
        attrs.push(Attribute::nominal("f", ["a", "b", "c"]));
        attrs.push(Attribute::numeric("x"));
        let schema = AttributeSchema::new(attrs, (0..k).collect()).unwrap();
        let rows = (0..n)
            .map(|_| {
                let f: u32 = rng.gen_range(0..3);
                let x: f64 = rng.gen_range(0.0..10.0);
                let mut row: Vec<Cell> = (0..k)
                    .map(|j| {
                        let p = if (j as u32 % 3) == f { 0.8 } else { 0.2 } * (0.5 + x / 20.0);
                        Cell::Category(rng.gen_bool(p) as u32)
                    })
                    .collect();
                row.push(if rng.gen_bool(0.05) {
                    Cell::Missing
                } else {
                    Cell::Category(f)
                });
                row.push(Cell::Numeric(x));
                row
            })
            .collect();
        MultiLabelDataset::from_rows("random", schema, rows).unwrap()
    }

    fn all_specs() -> Vec<LearnerSpec> {
        vec![
            LearnerSpec::ZeroR,
            LearnerSpec::NaiveBayes,
            LearnerSpec::Knn { k: 3 },
            LearnerSpec::HoeffdingTree(HoeffdingParams {
                grace_period: 20,
                ..Default::default()
            }),
            LearnerSpec::Ripper(RipperParams::default()),
        ]
    }

    #[test]
    fn ranking_and_bipartition_example() {
        let p = MultiLabelPrediction::from_confidences(vec![0.9, 0.1, 0.6], 0.5);
        assert_eq!(p.ranking, vec![1, 3, 2]);
        assert_eq!(p.bipartition, vec![true, false, true]);
        let p = MultiLabelPrediction::from_confidences(vec![0.0; 4], 0.5);
        assert_eq!(p.ranking, vec![1, 2, 3, 4]);
        assert!(p.bipartition.iter().all(|b| !b));
        let p = MultiLabelPrediction::from_confidences(vec![0.0, 0.3], 0.0);
        assert_eq!(p.bipartition, vec![true, true]);
    }

    #[test]
    fn br_transform_shapes() {
        let ds = random_dataset(3, 100, 1);
        let views = br_transform(&ds).unwrap();
        assert_eq!(views.len(), 3);
        for v in &views {
            assert_eq!(v.len(), 100);
            assert_eq!(v.features().len(), ds.schema().len() - 3);
        }
    }

    #[test]
    fn chained_copy_label_is_learned_exactly() {
        // l1 is a copy of l0; its chained learner sees l0 and reaches 1.0.
        let base = random_dataset(1, 200, 3);
        let mut attrs = vec![Attribute::binary_label("l0"), Attribute::binary_label("l1")];
        attrs.extend(base.schema().attributes()[1..].iter().cloned());
        let schema = AttributeSchema::new(attrs, vec![0, 1]).unwrap();
        let rows = base
            .instances()
            .iter()
            .map(|inst| {
                let v = inst.values();
                let mut row = vec![v[0], v[0]];
                row.extend_from_slice(&v[1..]);
                row
            })
            .collect();
        let ds = MultiLabelDataset::from_rows("copy", schema, rows).unwrap();
        let model = train_cc(
            &ds,
            &LearnerSpec::Knn { k: 1 },
            &[0, 1],
            1,
            Execution::Parallel,
        )
        .unwrap();
        let ModelKind::Cc { learners, .. } = model.kind() else {
            unreachable!()
        };
        let view = SingleLabelView::for_label(&ds, 1, &[0]).unwrap();
        let correct = (0..ds.len())
            .filter(|&i| learners[1].predict(ds.instance(i).values()).unwrap() == view.target(i))
            .count();
        assert_eq!(correct, ds.len());
    }

    #[test]
    fn lp_single_labelset() {
        let ds = random_dataset(2, 30, 4);
        let rows: Vec<Vec<Cell>> = ds
            .instances()
            .iter()
            .map(|inst| {
                let mut v = inst.values().to_vec();
                v[0] = Cell::Category(1);
                v[1] = Cell::Category(0);
                v
            })
            .collect();
        let ds = MultiLabelDataset::from_rows("one", ds.schema().clone(), rows).unwrap();
        for spec in all_specs() {
            let m = train_lp(&ds, &spec, 1).unwrap();
            for inst in ds.instances() {
                let p = predict(&m, inst.values(), 0.5).unwrap();
                assert_eq!(p.bipartition, vec![true, false]);
                assert_eq!(p.confidences, vec![1.0, 0.0]);
            }
        }
    }

    #[test]
    fn lp_confidences_are_marginals() {
        let ds = random_dataset(3, 120, 5);
        let m = train_lp(&ds, &LearnerSpec::NaiveBayes, 1).unwrap();
        let ModelKind::Lp { labelsets, learner } = m.kind() else {
            unreachable!()
        };
        let row = ds.instance(0).values();
        let dist = learner.predict_distribution(row).unwrap();
        let p = predict(&m, row, 0.5).unwrap();
        for j in 0..3 {
            let expected: f64 = dist
                .iter()
                .zip(labelsets)
                .filter(|(_, s)| s[j])
                .map(|(d, _)| d)
                .sum();
            assert!((p.confidences[j] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn errors_name_the_label() {
        let ds = random_dataset(2, 4, 6);
        let err = train_br(&ds, &LearnerSpec::Knn { k: 10 }, 1, Execution::Sequential).unwrap_err();
        assert!(err.to_string().contains("label 'l0'"), "{err}");
    }

    #[test]
    fn wrong_width_is_prediction_error() {
        let ds = random_dataset(2, 20, 7);
        let m = train_br(&ds, &LearnerSpec::ZeroR, 1, Execution::Sequential).unwrap();
        assert!(matches!(
            predict(&m, &[Cell::Missing], 0.5),
            Err(Error::Prediction(_))
        ));
    }

    #[test]
    fn model_spec_from_toml() {
        let s: ModelSpec = toml::from_str(
            "transform = \"cc\"\nchain_order = { random = 7 }\nbase = { kind = \"ripper\" }\n",
        )
        .unwrap();
        assert_eq!(s.transform, Transform::Cc);
        assert_eq!(s.chain_order, ChainOrder::Random(7));
        assert_eq!(s.threshold, 0.5);
        assert_eq!(s.name(), "CC/JRip");
        assert_eq!(ChainOrder::Random(7).resolve(5).unwrap().len(), 5);
        assert!(ChainOrder::Explicit(vec![0, 0]).resolve(2).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let ds = random_dataset(4, 150, 8);
        for t in [Transform::Br, Transform::Cc, Transform::Bcc, Transform::Lp] {
            let spec = ModelSpec::new(t, LearnerSpec::Ripper(RipperParams::default()));
            let a = train(&ds, &spec, Execution::Sequential).unwrap();
            let b = train(&ds, &spec, Execution::Parallel).unwrap();
            assert_eq!(a, b);
            let pa = predict_batch(&a, ds.instances(), 0.5, Execution::Sequential).unwrap();
            let pb = predict_batch(&b, ds.instances(), 0.5, Execution::Parallel).unwrap();
            assert_eq!(pa, pb);
        }
    }

    fn learner_strategy() -> impl Strategy<Value = LearnerSpec> {
        (0usize..5).prop_map(|i| all_specs().swap_remove(i))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn br_is_label_permutation_equivariant(
            k in 2usize..5, n in 10usize..60, seed in 0u64..1000,
            spec in learner_strategy(), perm_seed in 0u64..1000,
        ) {
            let ds = random_dataset(k, n, seed);
            let perm = ChainOrder::Random(perm_seed).resolve(k).unwrap();
            let permuted = ds.permute_labels(&perm).unwrap();
            let a = train_br(&ds, &spec, 1, Execution::Sequential).unwrap();
            let b = train_br(&permuted, &spec, 1, Execution::Sequential).unwrap();
            for (i, inst) in ds.instances().iter().enumerate() {
                let pa = predict(&a, inst.values(), 0.5).unwrap();
                let pb = predict(&b, permuted.instance(i).values(), 0.5).unwrap();
                for (jb, &ja) in perm.iter().enumerate() {
                    prop_assert_eq!(pa.confidences[ja], pb.confidences[jb]);
                    prop_assert_eq!(pa.bipartition[ja], pb.bipartition[jb]);
                }
            }
        }

        #[test]
        fn single_label_transforms_match_br(n in 10usize..60, seed in 0u64..1000, spec in learner_strategy()) {
            let ds = random_dataset(1, n, seed);
            let br = train_br(&ds, &spec, 1, Execution::Sequential).unwrap();
            let cc = train_cc(&ds, &spec, &[0], 1, Execution::Sequential).unwrap();
            let bcc = train_bcc(&ds, &spec, 1, Execution::Sequential).unwrap();
            for inst in ds.instances() {
                let p = predict(&br, inst.values(), 0.5).unwrap();
                prop_assert_eq!(&p, &predict(&cc, inst.values(), 0.5).unwrap());
                prop_assert_eq!(&p, &predict(&bcc, inst.values(), 0.5).unwrap());
            }
        }

        #[test]
        fn lp_predicts_only_training_labelsets(k in 1usize..5, n in 10usize..60, seed in 0u64..1000, spec in learner_strategy()) {
            let ds = random_dataset(k, n, seed);
            let m = train_lp(&ds, &spec, 1).unwrap();
            let seen: std::collections::HashSet<Vec<bool>> = (0..ds.len()).map(|i| ds.label_row(i)).collect();
            let other = random_dataset(k, 30, seed + 1);
            for inst in other.instances() {
                let p = predict(&m, inst.values(), 0.5).unwrap();
                prop_assert!(seen.contains(&p.bipartition));
            }
        }

        #[test]
        fn predictions_are_well_formed(
            k in 1usize..5, n in 10usize..50, seed in 0u64..1000, spec in learner_strategy(), t in 0usize..4,
        ) {
            let ds = random_dataset(k, n, seed);
            let transform = [Transform::Br, Transform::Cc, Transform::Bcc, Transform::Lp][t];
            let m = train(&ds, &ModelSpec::new(transform, spec), Execution::Sequential).unwrap();
            for p in predict_batch(&m, ds.instances(), 0.5, Execution::Sequential).unwrap() {
                prop_assert!(p.confidences.iter().all(|c| (0.0..=1.0).contains(c)));
                let mut r = p.ranking.clone();
                r.sort_unstable();
                prop_assert_eq!(r, (1..=k).collect::<Vec<_>>());
            }
        }
    }
}
