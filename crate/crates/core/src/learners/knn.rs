use serde::{Deserialize, Serialize};

use super::{FeatureSpec, SingleLabelView};
use crate::dataset::Cell;
use crate::error::{Error, Result};

/// Lazy k-nearest-neighbour classifier over mixed attributes.
///
/// Per-attribute distance: nominal 0/1 mismatch, numeric `|a-b|` divided by
/// the training range, and 1 when either side is missing. Attribute
/// distances are combined as a sum of squares. Ties in distance go to the
/// lower training row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Knn {
    k: usize,
    n_classes: usize,
    /// Projected training rows, one cell per feature.
    rows: Vec<Vec<Cell>>,
    targets: Vec<u32>,
    /// Training `(min, max)` per feature; `None` for nominal or all-missing.
    ranges: Vec<Option<(f64, f64)>>,
}

impl Knn {
    pub(crate) fn fit(view: &SingleLabelView<'_>, k: usize) -> Result<Self> {
        if k == 0 || k > view.len() {
            return Err(Error::Training(format!(
                "k = {k} needs 1 <= k <= training size {}",
                view.len()
            )));
        }
        let features = view.features();
        let rows: Vec<Vec<Cell>> = (0..view.len())
            .map(|i| features.iter().map(|f| view.row(i)[f.column]).collect())
            .collect();
        let ranges = features
            .iter()
            .enumerate()
            .map(|(j, f)| {
                if !f.is_numeric() {
                    return None;
                }
                rows.iter()
                    .filter_map(|r| r[j].numeric())
                    .fold(None, |acc, x| match acc {
                        None => Some((x, x)),
                        Some((lo, hi)) => Some((f64::min(lo, x), f64::max(hi, x))),
                    })
            })
            .collect();
        Ok(Knn {
            k,
            n_classes: view.class_count(),
            rows,
            targets: view.targets().to_vec(),
            ranges,
        })
    }

    fn distance(&self, stored: &[Cell], specs: &[FeatureSpec], query: &[Cell]) -> f64 {
        let mut sum = 0.0;
        for (j, spec) in specs.iter().enumerate() {
            let d = match (stored[j], query[spec.column]) {
                (Cell::Missing, _) | (_, Cell::Missing) => 1.0,
                (Cell::Category(a), Cell::Category(b)) => (a != b) as u8 as f64,
                (Cell::Numeric(a), Cell::Numeric(b)) => match self.ranges[j] {
                    Some((lo, hi)) if hi > lo => (a - b).abs() / (hi - lo),
                    _ => (a != b) as u8 as f64,
                },
                _ => 1.0,
            };
            sum += d * d;
        }
        sum
    }

    pub(crate) fn distribution(&self, specs: &[FeatureSpec], row: &[Cell]) -> Vec<f64> {
        let mut scored: Vec<(f64, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (self.distance(r, specs, row), i))
            .collect();
        let by_distance_then_row =
            |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if self.k < scored.len() {
            scored.select_nth_unstable_by(self.k - 1, by_distance_then_row);
        }
        let mut votes = vec![0.0; self.n_classes];
        for &(_, i) in &scored[..self.k] {
            votes[self.targets[i] as usize] += 1.0;
        }
        votes.iter_mut().for_each(|v| *v /= self.k as f64);
        votes
    }
}
