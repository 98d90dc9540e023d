//! Benchmark records.

use serde::{Deserialize, Serialize};

use crate::model::Cost;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub n: usize,
    pub h: usize,
    pub ub: Cost,
    pub lb: Cost,
    /// Wall seconds.
    pub t: f64,
    /// Percent, see [`optimality_gap`].
    pub gap: f64,
}

/// `(ub - lb) / ub * 100`; zero when `ub` is zero.
pub fn optimality_gap(ub: Cost, lb: Cost) -> f64 {
    if ub == 0 {
        0.0
    } else {
        ub.saturating_sub(lb) as f64 / ub as f64 * 100.0
    }
}

impl BenchRecord {
    pub fn new(
        instance: impl Into<String>,
        n: usize,
        h: usize,
        ub: Cost,
        lb: Cost,
        t: f64,
    ) -> Self {
        Self {
            instance: instance.into(),
            n,
            h,
            ub,
            lb,
            t,
            gap: optimality_gap(ub, lb),
        }
    }

    /// Recomputes the gap against the best lower bound over several methods.
    pub fn with_best_lower_bound(mut self, lb: Cost) -> Self {
        self.lb = self.lb.max(lb).min(self.ub);
        self.gap = optimality_gap(self.ub, self.lb);
        self
    }
}
