//! Error metrics, box-plot statistics and outlier-adjusted means.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;

/// Relative errors at or above this value mean the exponent was misread.
pub const EXPONENT_ERROR: f64 = 1.0;

/// Whisker reach in multiples of the interquartile range.
pub const WHISKER_IQR: f64 = 1.5;

/// `|1 - response / correct|`.
pub fn relative_error(response: f64, correct: f64) -> Result<f64> {
    if correct == 0.0 || !correct.is_finite() {
        return Err(Error::Statistics(
            "relative error needs a finite, nonzero correct value",
        ));
    }
    Ok(math::abs(1.0 - response / correct))
}

pub fn is_exponent_error(error: f64) -> bool {
    error >= EXPONENT_ERROR
}

/// 0 for a correct categorical answer, 1 otherwise.
pub fn binary_error<T: PartialEq + ?Sized>(response: &T, correct: &T) -> f64 {
    if response == correct {
        0.0
    } else {
        1.0
    }
}

/// Quantile by linear interpolation between order statistics (R type 7).
/// `sorted` must be ascending and non-empty.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = math::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

impl BoxStats {
    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }

    pub fn fences(&self) -> (f64, f64) {
        let reach = WHISKER_IQR * self.iqr();
        (self.q1 - reach, self.q3 + reach)
    }
}

fn sorted_finite(xs: &[f64]) -> Result<Vec<f64>> {
    if xs.is_empty() {
        return Err(Error::Statistics("box statistics need at least one value"));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Statistics("box statistics need finite values"));
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

/// Quartiles, whiskers reaching the furthest datum within 1.5 IQR of the
/// box, and everything beyond as outliers (in ascending order).
pub fn box_stats(xs: &[f64]) -> Result<BoxStats> {
    let sorted = sorted_finite(xs)?;
    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let reach = WHISKER_IQR * (q3 - q1);
    let (low_fence, high_fence) = (q1 - reach, q3 + reach);
    let inside = |x: &&f64| **x >= low_fence && **x <= high_fence;
    let whisker_low = sorted.iter().find(inside).copied().unwrap_or(q1);
    let whisker_high = sorted.iter().rev().find(inside).copied().unwrap_or(q3);
    let outliers = sorted
        .iter()
        .copied()
        .filter(|x| *x < low_fence || *x > high_fence)
        .collect();
    Ok(BoxStats {
        q1,
        median,
        q3,
        whisker_low,
        whisker_high,
        outliers,
    })
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

/// Mean after dropping the [`box_stats`] outliers.
pub fn adjusted_mean(xs: &[f64]) -> Result<f64> {
    let stats = box_stats(xs)?;
    let (low, high) = stats.fences();
    let kept: Vec<f64> = xs
        .iter()
        .copied()
        .filter(|x| *x >= low && *x <= high)
        .collect();
    // the median always lies inside the fences, so `kept` is non-empty
    mean(&kept).ok_or(Error::Statistics("no values left after outlier removal"))
}
