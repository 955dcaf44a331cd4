//! Brute-force multi-label metrics over explicit label sets. Written without
//! reference to the library code so it can serve as an independent check.

#![allow(dead_code)]

use std::collections::HashSet;

pub struct Case {
    pub k: usize,
    pub y: Vec<HashSet<usize>>,
    pub z: Vec<HashSet<usize>>,
    /// `rank[i][label]`, 1 = top.
    pub rank: Vec<Vec<usize>>,
}

pub struct Expected {
    pub exact_match: f64,
    pub precision: f64,
    pub recall: f64,
    pub accuracy: f64,
    pub f1_example: f64,
    pub hamming_loss: f64,
    pub one_error: f64,
    pub ranking_loss: Option<f64>,
    pub coverage: Option<f64>,
    pub f1_micro: f64,
    pub harmonic_score: f64,
    pub per_label: Vec<f64>,
}

fn frac(num: usize, den: usize, both_empty: bool) -> f64 {
    if both_empty {
        return 1.0;
    }
    if den == 0 {
        return 0.0;
    }
    num as f64 / den as f64
}

pub fn evaluate(c: &Case) -> Expected {
    let n = c.y.len() as f64;
    let labels: HashSet<usize> = (0..c.k).collect();
    let mut e = Expected {
        exact_match: 0.0,
        precision: 0.0,
        recall: 0.0,
        accuracy: 0.0,
        f1_example: 0.0,
        hamming_loss: 0.0,
        one_error: 0.0,
        ranking_loss: None,
        coverage: None,
        f1_micro: 0.0,
        harmonic_score: 0.0,
        per_label: vec![0.0; c.k],
    };
    let (mut rl_sum, mut rl_n, mut cov_sum, mut cov_n) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..c.y.len() {
        let (y, z) = (&c.y[i], &c.z[i]);
        let inter = y.intersection(z).count();
        let union = y.union(z).count();
        let both_empty = y.is_empty() && z.is_empty();
        if y == z {
            e.exact_match += 1.0;
        }
        e.precision += frac(inter, z.len(), both_empty);
        e.recall += frac(inter, y.len(), both_empty);
        e.accuracy += frac(inter, union, both_empty);
        e.f1_example += frac(2 * inter, y.len() + z.len(), both_empty);
        e.hamming_loss += y.symmetric_difference(z).count() as f64;

        let top = (0..c.k).find(|l| c.rank[i][*l] == 1).unwrap();
        if !y.contains(&top) {
            e.one_error += 1.0;
        }
        let ybar: HashSet<usize> = labels.difference(y).copied().collect();
        if !y.is_empty() && !ybar.is_empty() {
            let mut bad = 0;
            for a in y {
                for b in &ybar {
                    if c.rank[i][*a] > c.rank[i][*b] {
                        bad += 1;
                    }
                }
            }
            rl_sum += bad as f64 / (y.len() * ybar.len()) as f64;
            rl_n += 1;
        }
        if !y.is_empty() {
            let mut depth = 0;
            for l in y {
                depth = depth.max(c.rank[i][*l]);
            }
            cov_sum += (depth - 1) as f64;
            cov_n += 1;
        }
    }
    e.exact_match /= n;
    e.precision /= n;
    e.recall /= n;
    e.accuracy /= n;
    e.f1_example /= n;
    e.hamming_loss /= n * c.k as f64;
    e.one_error /= n;
    e.ranking_loss = (rl_n > 0).then(|| rl_sum / rl_n as f64);
    e.coverage = (cov_n > 0).then(|| cov_sum / cov_n as f64);

    let (mut tp_all, mut fp_all, mut fn_all) = (0usize, 0usize, 0usize);
    let mut h_sum = 0.0;
    for l in 0..c.k {
        let (mut tp, mut fp, mut fn_, mut tn) = (0usize, 0usize, 0usize, 0usize);
        for i in 0..c.y.len() {
            let truth = c.y[i].contains(&l);
            let pred = c.z[i].contains(&l);
            if truth == pred {
                e.per_label[l] += 1.0;
            }
            if truth && pred {
                tp += 1;
            } else if pred {
                fp += 1;
            } else if truth {
                fn_ += 1;
            } else {
                tn += 1;
            }
        }
        e.per_label[l] /= n;
        tp_all += tp;
        fp_all += fp;
        fn_all += fn_;
        if tp + fn_ > 0 && tn + fp > 0 {
            let tpr = tp as f64 / (tp + fn_) as f64;
            let tnr = tn as f64 / (tn + fp) as f64;
            if tpr > 0.0 && tnr > 0.0 {
                h_sum += 2.0 / (1.0 / tpr + 1.0 / tnr);
            }
        }
    }
    let den = 2 * tp_all + fp_all + fn_all;
    e.f1_micro = if den == 0 {
        0.0
    } else {
        (2 * tp_all) as f64 / den as f64
    };
    e.harmonic_score = h_sum / c.k as f64;
    e
}

/// Random case with `1 <= k <= max_k` labels and `1 <= n <= max_n` instances.
pub fn random_case(rng: &mut impl rand::Rng, max_k: usize, max_n: usize) -> Case {
    use rand::seq::SliceRandom;
    let k = rng.gen_range(1..=max_k);
    let n = rng.gen_range(1..=max_n);
    let mut case = Case {
        k,
        y: Vec::new(),
        z: Vec::new(),
        rank: Vec::new(),
    };
    for _ in 0..n {
        case.y.push((0..k).filter(|_| rng.gen_bool(0.4)).collect());
        case.z.push((0..k).filter(|_| rng.gen_bool(0.4)).collect());
        let mut perm: Vec<usize> = (1..=k).collect();
        perm.shuffle(rng);
        case.rank.push(perm);
    }
    case
}

/// Largest absolute difference between the library report and the oracle,
/// or `Err` naming a mismatch in definedness.
pub fn max_deviation(c: &Case) -> Result<f64, String> {
    use mll_core::metrics::{self, EvalPairs, MetricReport};
    let mut pairs = EvalPairs::new(c.k);
    for i in 0..c.y.len() {
        let y = (0..c.k).map(|l| c.y[i].contains(&l)).collect();
        let z = (0..c.k).map(|l| c.z[i].contains(&l)).collect();
        pairs
            .push(y, z, c.rank[i].clone())
            .map_err(|e| e.to_string())?;
    }
    let r = MetricReport::evaluate(&pairs).map_err(|e| e.to_string())?;
    let e = evaluate(c);
    if r.zero_one_loss != 1.0 - r.exact_match || r.hamming_score != 1.0 - r.hamming_loss {
        return Err("identity violated".into());
    }
    let mut dev: f64 = 0.0;
    let mut cmp = |a: f64, b: f64| dev = dev.max((a - b).abs());
    cmp(r.exact_match, e.exact_match);
    cmp(r.precision, e.precision);
    cmp(r.recall, e.recall);
    cmp(r.accuracy, e.accuracy);
    cmp(r.f1_example, e.f1_example);
    cmp(r.hamming_loss, e.hamming_loss);
    cmp(r.one_error, e.one_error);
    cmp(r.f1_micro, e.f1_micro);
    cmp(r.harmonic_score, e.harmonic_score);
    for (a, b) in r.per_label_accuracy.iter().zip(&e.per_label) {
        cmp(*a, *b);
    }
    for (name, lib, oracle) in [
        (
            "ranking_loss",
            metrics::ranking_loss(&pairs).ok(),
            e.ranking_loss,
        ),
        ("coverage", metrics::coverage(&pairs).ok(), e.coverage),
    ] {
        match (lib, oracle) {
            (Some(a), Some(b)) => cmp(a, b),
            (None, None) => {}
            _ => return Err(format!("{name} defined on one side only")),
        }
    }
    Ok(dev)
}
