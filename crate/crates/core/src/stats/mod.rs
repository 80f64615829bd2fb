//! Error metrics, descriptive statistics and nonparametric significance tests.

mod analysis;
mod descriptive;
mod nonparametric;
mod special;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use analysis::{
    analyze, AnalysisReport, DesignSummary, Measure, MeasureSummary, OmnibusResult, PairCell,
    PairwiseMatrix, ScoredRecord, TaskReport,
};
pub use descriptive::{
    adjusted_mean, binary_error, box_stats, is_exponent_error, mean, quantile_sorted,
    relative_error, BoxStats, EXPONENT_ERROR, WHISKER_IQR,
};
pub use nonparametric::{
    chi2_independence, kruskal_wallis, mann_whitney, rank_average, ChiSquare, KruskalWallis,
    MannWhitney, PMethod, EXACT_MAX_GROUP,
};
pub use special::{chi2_sf, gamma_q, normal_sf};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub alpha: f64,
    /// Number of pairwise comparisons each p-value is multiplied by.
    pub bonferroni_factor: u32,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            bonferroni_factor: 10,
        }
    }
}

impl AnalysisConfig {
    pub fn new(alpha: f64, bonferroni_factor: u32) -> Result<Self> {
        let cfg = Self {
            alpha,
            bonferroni_factor,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Usage(alloc::format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.bonferroni_factor == 0 {
            return Err(Error::Usage("Bonferroni factor must be at least 1".into()));
        }
        Ok(())
    }
}

/// `min(1, p * factor)`.
pub fn bonferroni(p: f64, cfg: &AnalysisConfig) -> f64 {
    (p * cfg.bonferroni_factor as f64).min(1.0)
}
