//! Hoeffding tree (VFDT): an incremental decision tree that splits a leaf once
//! the Hoeffding bound says the best attribute is reliably better than the
//! runner-up.

use serde::{Deserialize, Serialize};

use super::gaussian::GaussianStats;
use super::{normalize, FeatureSpec, SingleLabelView};
use crate::dataset::Cell;
use crate::error::{Error, Result};

/// Candidate thresholds evaluated per numeric attribute.
const NUMERIC_SPLIT_POINTS: usize = 10;
/// A split is only valid if at least two branches get this share of weight.
const MIN_BRANCH_FRACTION: f64 = 0.01;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafStrategy {
    #[default]
    MajorityClass,
    NaiveBayes,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HoeffdingParams {
    /// One minus the confidence that the chosen split is the best one.
    pub delta: f64,
    /// Tie threshold: split anyway once the bound drops below it.
    pub tau: f64,
    /// Instances a leaf observes between split attempts.
    pub grace_period: usize,
    pub leaf_strategy: LeafStrategy,
}

impl Default for HoeffdingParams {
    fn default() -> Self {
        HoeffdingParams {
            delta: 1e-7,
            tau: 0.05,
            grace_period: 200,
            leaf_strategy: LeafStrategy::MajorityClass,
        }
    }
}

impl HoeffdingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!("delta {} not in (0,1)", self.delta)));
        }
        if self.tau.is_nan() || self.tau < 0.0 {
            return Err(Error::Config(format!("tau {} must be >= 0", self.tau)));
        }
        if self.grace_period == 0 {
            return Err(Error::Config("grace period must be >= 1".into()));
        }
        Ok(())
    }
}

/// `sqrt(R^2 ln(1/delta) / 2n)`: with probability `1 - delta` the true mean of
/// a variable with range `R` is within this distance of the mean of `n`
/// observations.
pub fn hoeffding_bound(range: f64, delta: f64, n: f64) -> Result<f64> {
    if !(range > 0.0 && range.is_finite()) {
        return Err(Error::Range(format!("range {range} must be positive")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Range(format!("delta {delta} not in (0,1)")));
    }
    if n.is_nan() || n < 1.0 {
        return Err(Error::Range(format!("n {n} must be >= 1")));
    }
    Ok((range * range * (1.0 / delta).ln() / (2.0 * n)).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
enum Observer {
    /// `counts[category][class]`
    Nominal {
        counts: Vec<Vec<f64>>,
    },
    Numeric {
        per_class: Vec<GaussianStats>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
enum SplitTest {
    /// One branch per category.
    Nominal { feature: usize },
    /// Branch 0 for `x <= threshold`, branch 1 otherwise.
    Threshold { feature: usize, threshold: f64 },
}

impl SplitTest {
    fn branch(&self, specs: &[FeatureSpec], row: &[Cell]) -> Option<usize> {
        match *self {
            SplitTest::Nominal { feature } => {
                row[specs[feature].column].category().map(|c| c as usize)
            }
            SplitTest::Threshold { feature, threshold } => row[specs[feature].column]
                .numeric()
                .map(|x| if x <= threshold { 0 } else { 1 }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf {
        class_counts: Vec<f64>,
        weight_at_last_attempt: f64,
        observers: Vec<Observer>,
    },
    Split {
        test: SplitTest,
        children: Vec<usize>,
        class_counts: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingTree {
    nodes: Vec<Node>,
    n_classes: usize,
    params: HoeffdingParams,
}

struct Suggestion {
    merit: f64,
    test: Option<SplitTest>,
    branch_counts: Vec<Vec<f64>>,
}

impl HoeffdingTree {
    pub(crate) fn fit(view: &SingleLabelView<'_>, params: &HoeffdingParams) -> Result<Self> {
        params.validate()?;
        let mut tree = HoeffdingTree::empty(view.features(), view.class_count(), params.clone());
        for i in 0..view.len() {
            tree.learn(view.features(), view.row(i), view.target(i) as usize);
        }
        Ok(tree)
    }

    fn empty(specs: &[FeatureSpec], n_classes: usize, params: HoeffdingParams) -> Self {
        HoeffdingTree {
            nodes: vec![new_leaf(specs, vec![0.0; n_classes])],
            n_classes,
            params,
        }
    }

    /// Number of split nodes.
    pub fn split_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Split { .. }))
            .count()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.len() - self.split_count()
    }

    /// Routes a row as far as it goes: the leaf it reaches, or the split node
    /// whose attribute is missing. Returns the node path.
    fn route(&self, specs: &[FeatureSpec], row: &[Cell]) -> Vec<usize> {
        let mut path = vec![0];
        loop {
            let node = *path.last().expect("nonempty");
            match &self.nodes[node] {
                Node::Leaf { .. } => return path,
                Node::Split { test, children, .. } => match test.branch(specs, row) {
                    Some(b) => path.push(children[b]),
                    None => return path,
                },
            }
        }
    }

    fn learn(&mut self, specs: &[FeatureSpec], row: &[Cell], class: usize) {
        let node = *self.route(specs, row).last().expect("nonempty");
        let Node::Leaf {
            class_counts,
            weight_at_last_attempt,
            observers,
        } = &mut self.nodes[node]
        else {
            // Attribute tested here is missing: nothing to learn from.
            return;
        };
        class_counts[class] += 1.0;
        for (obs, spec) in observers.iter_mut().zip(specs) {
            match (obs, row[spec.column]) {
                (Observer::Nominal { counts }, Cell::Category(v)) => {
                    counts[v as usize][class] += 1.0
                }
                (Observer::Numeric { per_class }, Cell::Numeric(x)) => per_class[class].add(x),
                _ => {}
            }
        }
        let seen: f64 = class_counts.iter().sum();
        if seen - *weight_at_last_attempt >= self.params.grace_period as f64 {
            *weight_at_last_attempt = seen;
            self.attempt_split(node, specs);
        }
    }

    fn attempt_split(&mut self, node: usize, specs: &[FeatureSpec]) {
        let Node::Leaf {
            class_counts,
            observers,
            ..
        } = &self.nodes[node]
        else {
            return;
        };
        if class_counts.iter().filter(|c| **c > 0.0).count() < 2 {
            return;
        }
        let mut suggestions = vec![Suggestion {
            merit: 0.0,
            test: None,
            branch_counts: vec![class_counts.clone()],
        }];
        for (f, obs) in observers.iter().enumerate() {
            if let Some(s) = best_split_for(f, obs, class_counts) {
                suggestions.push(s);
            }
        }
        // Stable sort keeps the null split and lower feature indices first on ties.
        suggestions.sort_by(|a, b| b.merit.total_cmp(&a.merit));
        let n: f64 = class_counts.iter().sum();
        let range = (self.n_classes.max(2) as f64).log2();
        let epsilon = hoeffding_bound(range, self.params.delta, n).expect("validated parameters");
        let best = &suggestions[0];
        let second = suggestions.get(1).map_or(0.0, |s| s.merit);
        let should_split = best.merit - second > epsilon || epsilon < self.params.tau;
        if !should_split || best.test.is_none() || best.merit <= 0.0 {
            return;
        }
        let best = suggestions.swap_remove(0);
        let test = best.test.expect("checked above");
        let mut children = Vec::with_capacity(best.branch_counts.len());
        for counts in best.branch_counts {
            let mut leaf = new_leaf(specs, counts);
            if let Node::Leaf {
                class_counts,
                weight_at_last_attempt,
                ..
            } = &mut leaf
            {
                *weight_at_last_attempt = class_counts.iter().sum();
            }
            children.push(self.nodes.len());
            self.nodes.push(leaf);
        }
        let class_counts = match &self.nodes[node] {
            Node::Leaf { class_counts, .. } => class_counts.clone(),
            Node::Split { .. } => unreachable!(),
        };
        self.nodes[node] = Node::Split {
            test,
            children,
            class_counts,
        };
    }

    pub(crate) fn distribution(&self, specs: &[FeatureSpec], row: &[Cell]) -> Vec<f64> {
        let path = self.route(specs, row);
        let node = &self.nodes[*path.last().expect("nonempty")];
        if let (
            LeafStrategy::NaiveBayes,
            Node::Leaf {
                class_counts,
                observers,
                ..
            },
        ) = (self.params.leaf_strategy, node)
        {
            if class_counts.iter().sum::<f64>() > 0.0 {
                return leaf_naive_bayes(class_counts, observers, specs, row);
            }
        }
        // Nearest node on the path with any observed weight.
        for &id in path.iter().rev() {
            let counts = match &self.nodes[id] {
                Node::Leaf { class_counts, .. } | Node::Split { class_counts, .. } => class_counts,
            };
            if counts.iter().sum::<f64>() > 0.0 {
                let mut d = counts.clone();
                normalize(&mut d);
                return d;
            }
        }
        vec![1.0 / self.n_classes as f64; self.n_classes]
    }
}

fn new_leaf(specs: &[FeatureSpec], class_counts: Vec<f64>) -> Node {
    let n_classes = class_counts.len();
    Node::Leaf {
        observers: specs
            .iter()
            .map(|s| match s.arity {
                Some(a) => Observer::Nominal {
                    counts: vec![vec![0.0; n_classes]; a as usize],
                },
                None => Observer::Numeric {
                    per_class: vec![GaussianStats::default(); n_classes],
                },
            })
            .collect(),
        class_counts,
        weight_at_last_attempt: 0.0,
    }
}

fn entropy(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|c| **c > 0.0)
        .map(|c| {
            let p = c / total;
            -p * p.log2()
        })
        .sum()
}

/// Information gain of a split, or `None` when fewer than two branches carry
/// a meaningful share of the weight.
pub(crate) fn info_gain(pre: &[f64], branches: &[Vec<f64>]) -> Option<f64> {
    let weights: Vec<f64> = branches.iter().map(|b| b.iter().sum()).collect();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let substantial = weights
        .iter()
        .filter(|w| **w > MIN_BRANCH_FRACTION * total)
        .count();
    if substantial < 2 {
        return None;
    }
    let post: f64 = branches
        .iter()
        .zip(&weights)
        .map(|(b, w)| w / total * entropy(b))
        .sum();
    Some(entropy(pre) - post)
}

fn best_split_for(feature: usize, obs: &Observer, pre: &[f64]) -> Option<Suggestion> {
    match obs {
        Observer::Nominal { counts } => {
            let merit = info_gain(pre, counts)?;
            Some(Suggestion {
                merit,
                test: Some(SplitTest::Nominal { feature }),
                branch_counts: counts.clone(),
            })
        }
        Observer::Numeric { per_class } => {
            let lo = per_class.iter().filter_map(|g| g.min).reduce(f64::min)?;
            let hi = per_class.iter().filter_map(|g| g.max).reduce(f64::max)?;
            if hi <= lo {
                return None;
            }
            let mut best: Option<Suggestion> = None;
            for i in 1..=NUMERIC_SPLIT_POINTS {
                let threshold = lo + (hi - lo) * i as f64 / (NUMERIC_SPLIT_POINTS + 1) as f64;
                let left: Vec<f64> = per_class
                    .iter()
                    .map(|g| g.weight_at_or_below(threshold))
                    .collect();
                let right: Vec<f64> = per_class.iter().zip(&left).map(|(g, l)| g.n - l).collect();
                let branches = vec![left, right];
                if let Some(merit) = info_gain(pre, &branches) {
                    if best.as_ref().is_none_or(|b| merit > b.merit) {
                        best = Some(Suggestion {
                            merit,
                            test: Some(SplitTest::Threshold { feature, threshold }),
                            branch_counts: branches,
                        });
                    }
                }
            }
            best
        }
    }
}

fn leaf_naive_bayes(
    class_counts: &[f64],
    observers: &[Observer],
    specs: &[FeatureSpec],
    row: &[Cell],
) -> Vec<f64> {
    let total: f64 = class_counts.iter().sum();
    let k = class_counts.len() as f64;
    let mut log_post: Vec<f64> = class_counts
        .iter()
        .map(|c| ((c + 1.0) / (total + k)).ln())
        .collect();
    for (obs, spec) in observers.iter().zip(specs) {
        match (obs, row[spec.column]) {
            (Observer::Nominal { counts }, Cell::Category(v)) => {
                let arity = counts.len() as f64;
                for (c, lp) in log_post.iter_mut().enumerate() {
                    let class_total: f64 = counts.iter().map(|row| row[c]).sum();
                    *lp += ((counts[v as usize][c] + 1.0) / (class_total + arity)).ln();
                }
            }
            (Observer::Numeric { per_class }, Cell::Numeric(x))
                if per_class.iter().all(|g| g.n > 0.0) =>
            {
                for (c, lp) in log_post.iter_mut().enumerate() {
                    *lp += per_class[c].log_density(x);
                }
            }
            _ => {}
        }
    }
    let max = log_post.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut d: Vec<f64> = log_post.iter().map(|lp| (lp - max).exp()).collect();
    normalize(&mut d);
    d
}
