use serde::{Deserialize, Serialize};

use super::SingleLabelView;
use crate::error::Result;

/// Majority-class baseline. Predicts the empirical class frequencies of the
/// training data for every input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroR {
    frequencies: Vec<f64>,
    majority: u32,
}

impl ZeroR {
    pub(crate) fn fit(view: &SingleLabelView<'_>) -> Result<Self> {
        let counts = view.class_counts();
        let n = view.len() as f64;
        let majority = super::argmax(&counts) as u32;
        Ok(ZeroR {
            frequencies: counts.iter().map(|c| c / n).collect(),
            majority,
        })
    }

    pub fn majority(&self) -> u32 {
        self.majority
    }

    pub(crate) fn distribution(&self) -> Vec<f64> {
        self.frequencies.clone()
    }
}
