use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::MultiLabelDataset;
use crate::error::{Error, Result};

pub const DEFAULT_TRAIN_FRACTION: f64 = 0.66;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "lowercase")]
pub enum SampleStrategy {
    /// The first `n` instances in stored order.
    First,
    /// `n` instances drawn without replacement; stored order is kept.
    Random { seed: u64 },
}

pub fn sample(
    ds: &MultiLabelDataset,
    n: usize,
    strategy: SampleStrategy,
) -> Result<MultiLabelDataset> {
    if n == 0 || n > ds.len() {
        return Err(Error::Range(format!(
            "sample size {n} outside 1..={}",
            ds.len()
        )));
    }
    let rows: Vec<usize> = match strategy {
        SampleStrategy::First => (0..n).collect(),
        SampleStrategy::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = rand::seq::index::sample(&mut rng, ds.len(), n).into_vec();
            rows.sort_unstable();
            rows
        }
    };
    Ok(ds.subset(&rows))
}

/// Shuffles with `seed`, then puts the first `ceil(fraction * n)` instances in
/// the training part and the rest in the test part.
pub fn split(
    ds: &MultiLabelDataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(MultiLabelDataset, MultiLabelDataset)> {
    let n = ds.len();
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Range(format!(
            "train fraction {train_fraction} not in (0,1)"
        )));
    }
    let n_train = train_size(n, train_fraction);
    if n_train == 0 || n_train >= n {
        return Err(Error::Range(format!(
            "train fraction {train_fraction} leaves an empty part for {n} instances"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok((ds.subset(&order[..n_train]), ds.subset(&order[n_train..])))
}

// The small slack keeps products such as 0.7 * 10 = 7.000000000000001 from
// rounding up to 8.
fn train_size(n: usize, fraction: f64) -> usize {
    (fraction * n as f64 - 1e-9).ceil().max(0.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Attribute, AttributeSchema, Cell};

    fn numbered(n: usize) -> MultiLabelDataset {
        let schema = AttributeSchema::new(
            vec![Attribute::binary_label("y"), Attribute::numeric("x")],
            vec![0],
        )
        .unwrap();
        let rows = (0..n)
            .map(|i| vec![Cell::Category((i % 2) as u32), Cell::Numeric(i as f64)])
            .collect();
        MultiLabelDataset::from_rows("n", schema, rows).unwrap()
    }

    fn ids(ds: &MultiLabelDataset) -> Vec<usize> {
        ds.instances().iter().map(|i| i.id()).collect()
    }

    #[test]
    fn first_full_is_identity() {
        let ds = numbered(12);
        assert_eq!(sample(&ds, 12, SampleStrategy::First).unwrap(), ds);
    }

    #[test]
    fn first_prefix_composes() {
        let ds = numbered(30);
        let a = sample(
            &sample(&ds, 20, SampleStrategy::First).unwrap(),
            7,
            SampleStrategy::First,
        )
        .unwrap();
        assert_eq!(a, sample(&ds, 7, SampleStrategy::First).unwrap());
    }

    #[test]
    fn random_is_deterministic_and_distinct() {
        let ds = numbered(100);
        let a = sample(&ds, 40, SampleStrategy::Random { seed: 9 }).unwrap();
        let b = sample(&ds, 40, SampleStrategy::Random { seed: 9 }).unwrap();
        assert_eq!(a, b);
        let mut v = ids(&a);
        v.dedup();
        assert_eq!(v.len(), 40);
        let c = sample(&ds, 40, SampleStrategy::Random { seed: 10 }).unwrap();
        assert_ne!(ids(&a), ids(&c));
    }

    #[test]
    fn sample_size_out_of_range() {
        let ds = numbered(5);
        assert!(matches!(
            sample(&ds, 6, SampleStrategy::First),
            Err(Error::Range(_))
        ));
        assert!(matches!(
            sample(&ds, 0, SampleStrategy::First),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn split_sizes() {
        let (tr, te) = split(&numbered(10), 0.66, 1).unwrap();
        assert_eq!((tr.len(), te.len()), (7, 3));
        let (tr, te) = split(&numbered(2), 0.5, 1).unwrap();
        assert_eq!((tr.len(), te.len()), (1, 1));
        let (tr, _) = split(&numbered(10), 0.7, 1).unwrap();
        assert_eq!(tr.len(), 7);
    }

    #[test]
    fn split_is_a_deterministic_partition() {
        let ds = numbered(50);
        let (tr, te) = split(&ds, 0.66, 3).unwrap();
        let (tr2, te2) = split(&ds, 0.66, 3).unwrap();
        assert_eq!(tr, tr2);
        assert_eq!(te, te2);
        let mut all: Vec<usize> = ids(&tr).into_iter().chain(ids(&te)).collect();
        all.sort_unstable();
        assert_eq!(all, (0..50).collect::<Vec<_>>());
    }

    #[test]
    fn degenerate_fractions() {
        let ds = numbered(3);
        for f in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(split(&ds, f, 0), Err(Error::Range(_))));
        }
        assert!(matches!(split(&ds, 0.99, 0), Err(Error::Range(_))));
    }
}
