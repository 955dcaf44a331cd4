use serde::{Deserialize, Serialize};

/// Smallest variance used when evaluating a Gaussian density.
pub(crate) const VARIANCE_FLOOR: f64 = 1e-6;

/// Running count, mean and sum of squared deviations (Welford), plus range.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub(crate) struct GaussianStats {
    pub n: f64,
    pub mean: f64,
    pub m2: f64,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl GaussianStats {
    pub fn add(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
        self.min = Some(self.min.map_or(x, |m| m.min(x)));
        self.max = Some(self.max.map_or(x, |m| m.max(x)));
    }

    /// Merges another summary (Chan et al. parallel update).
    pub fn merge(&mut self, other: &GaussianStats) {
        if other.n == 0.0 {
            return;
        }
        if self.n == 0.0 {
            *self = other.clone();
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n / n;
        self.m2 += other.m2 + d * d * self.n * other.n / n;
        self.n = n;
        self.min = match (self.min, other.min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.max = match (self.max, other.max) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }

    /// Unbiased variance, floored.
    pub fn variance(&self) -> f64 {
        if self.n < 2.0 {
            return VARIANCE_FLOOR;
        }
        (self.m2 / (self.n - 1.0)).max(VARIANCE_FLOOR)
    }

    pub fn log_density(&self, x: f64) -> f64 {
        let var = self.variance();
        let d = x - self.mean;
        -0.5 * (2.0 * std::f64::consts::PI * var).ln() - d * d / (2.0 * var)
    }

    /// Estimated number of observations `<= x` under the fitted normal,
    /// clamped by the observed range.
    pub fn weight_at_or_below(&self, x: f64) -> f64 {
        match (self.min, self.max) {
            (Some(lo), _) if x < lo => 0.0,
            (_, Some(hi)) if x >= hi => self.n,
            (Some(_), Some(_)) => {
                let sd = self.variance().sqrt();
                let z = (x - self.mean) / (sd * std::f64::consts::SQRT_2);
                (0.5 * (1.0 + libm::erf(z)) * self.n).clamp(0.0, self.n)
            }
            _ => 0.0,
        }
    }
}
