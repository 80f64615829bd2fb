//! Rank-based tests and the Pearson chi-squared test of independence.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::special::{chi2_sf, normal_sf};
use crate::error::{Error, Result};
use crate::math;

/// Mann–Whitney groups at or below this size get an exact permutation p.
pub const EXACT_MAX_GROUP: usize = 8;

/// Average ranks (1-based) of `values`, plus the sizes of the tie groups.
pub fn rank_average(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end share ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        if end - start > 1 {
            ties.push(end - start);
        }
        start = end;
    }
    (ranks, ties)
}

fn tie_sum(ties: &[usize]) -> f64 {
    ties.iter().map(|&t| (t * t * t - t) as f64).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KruskalWallis {
    pub h: f64,
    pub df: u32,
    pub p: f64,
}

/// Kruskal–Wallis H with tie correction; p from the chi-squared tail with k − 1 df.
pub fn kruskal_wallis<G: AsRef<[f64]>>(groups: &[G]) -> Result<KruskalWallis> {
    if groups.len() < 2 {
        return Err(Error::Statistics(
            "Kruskal-Wallis needs at least two groups",
        ));
    }
    if groups.iter().any(|g| g.as_ref().is_empty()) {
        return Err(Error::Statistics("Kruskal-Wallis groups must be non-empty"));
    }
    let pooled: Vec<f64> = groups
        .iter()
        .flat_map(|g| g.as_ref().iter().copied())
        .collect();
    if pooled.iter().any(|x| x.is_nan()) {
        return Err(Error::Statistics("Kruskal-Wallis input contains NaN"));
    }
    let n = pooled.len() as f64;
    let (ranks, ties) = rank_average(&pooled);
    let mut offset = 0;
    let mut weighted = 0.0;
    for g in groups {
        let len = g.as_ref().len();
        let rank_sum: f64 = ranks[offset..offset + len].iter().sum();
        weighted += rank_sum * rank_sum / len as f64;
        offset += len;
    }
    let df = (groups.len() - 1) as u32;
    let correction = 1.0 - tie_sum(&ties) / (n * n * n - n);
    if correction <= 0.0 {
        // every observation tied
        return Ok(KruskalWallis { h: 0.0, df, p: 1.0 });
    }
    let h_raw = 12.0 / (n * (n + 1.0)) * weighted - 3.0 * (n + 1.0);
    let h = (h_raw / correction).max(0.0);
    Ok(KruskalWallis {
        h,
        df,
        p: chi2_sf(h, df)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MannWhitney {
    /// U statistic of the first sample: its rank sum minus n1(n1 + 1)/2.
    pub u: f64,
    pub p: f64,
    pub method: PMethod,
}

/// Two-sided Mann–Whitney U test.
///
/// Both groups of at most [`EXACT_MAX_GROUP`] values use the exact permutation
/// distribution of the (tie-averaged) rank sum; larger samples use the normal
/// approximation with tie and continuity corrections.
pub fn mann_whitney(xs: &[f64], ys: &[f64]) -> Result<MannWhitney> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::Statistics(
            "Mann-Whitney needs two non-empty samples",
        ));
    }
    let pooled: Vec<f64> = xs.iter().chain(ys).copied().collect();
    if pooled.iter().any(|x| x.is_nan()) {
        return Err(Error::Statistics("Mann-Whitney input contains NaN"));
    }
    let (n1, n2) = (xs.len(), ys.len());
    let (ranks, ties) = rank_average(&pooled);
    let rank_sum: f64 = ranks[..n1].iter().sum();
    let u = rank_sum - (n1 * (n1 + 1)) as f64 / 2.0;
    if n1 <= EXACT_MAX_GROUP && n2 <= EXACT_MAX_GROUP {
        return Ok(MannWhitney {
            u,
            p: exact_p(&ranks, n1),
            method: PMethod::Exact,
        });
    }
    let n = (n1 + n2) as f64;
    let mu = (n1 * n2) as f64 / 2.0;
    let variance = (n1 * n2) as f64 / 12.0 * ((n + 1.0) - tie_sum(&ties) / (n * (n - 1.0)));
    let p = if variance <= 0.0 {
        1.0
    } else {
        let z = ((math::abs(u - mu) - 0.5).max(0.0)) / math::sqrt(variance);
        (2.0 * normal_sf(z)).min(1.0)
    };
    Ok(MannWhitney {
        u,
        p,
        method: PMethod::Normal,
    })
}

/// Two-sided permutation p of the first group's rank sum. Ranks are doubled
/// so tie averages stay integral; a subset-sum table counts every split.
fn exact_p(ranks: &[f64], n1: usize) -> f64 {
    let doubled: Vec<usize> = ranks
        .iter()
        .map(|r| math::round(r * 2.0) as usize)
        .collect();
    let max_sum: usize = doubled.iter().sum();
    // ways[k][s]: subsets of size k with doubled rank sum s
    let mut ways = vec![vec![0.0f64; max_sum + 1]; n1 + 1];
    ways[0][0] = 1.0;
    for (i, &r) in doubled.iter().enumerate() {
        for k in (1..=n1.min(i + 1)).rev() {
            let (lower, upper) = ways.split_at_mut(k);
            let (from, to) = (&lower[k - 1], &mut upper[0]);
            for s in (r..=max_sum).rev() {
                to[s] += from[s - r];
            }
        }
    }
    let observed: usize = doubled[..n1].iter().sum();
    // doubled centre of the rank-sum distribution: n1 (N + 1)
    let centre = (n1 * (doubled.len() + 1)) as i64;
    let distance = (observed as i64 - centre).abs();
    let total: f64 = ways[n1].iter().sum();
    let extreme: f64 = ways[n1]
        .iter()
        .enumerate()
        .filter(|(s, _)| (*s as i64 - centre).abs() >= distance)
        .map(|(_, w)| w)
        .sum();
    (extreme / total).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: u32,
    pub p: f64,
}

/// Pearson chi-squared test of independence on an r × c count table.
/// A table with a single row or column has df = 0 and reports p = 1.
pub fn chi2_independence<R: AsRef<[u64]>>(table: &[R]) -> Result<ChiSquare> {
    let rows = table.len();
    let cols = table.first().map_or(0, |r| r.as_ref().len());
    if rows == 0 || cols == 0 {
        return Err(Error::Statistics("contingency table is empty"));
    }
    if table.iter().any(|r| r.as_ref().len() != cols) {
        return Err(Error::Statistics("contingency table rows differ in length"));
    }
    let row_sums: Vec<f64> = table
        .iter()
        .map(|r| r.as_ref().iter().sum::<u64>() as f64)
        .collect();
    let col_sums: Vec<f64> = (0..cols)
        .map(|j| table.iter().map(|r| r.as_ref()[j]).sum::<u64>() as f64)
        .collect();
    if row_sums.iter().chain(&col_sums).any(|&s| s == 0.0) {
        return Err(Error::Statistics(
            "contingency table has an empty row or column",
        ));
    }
    let total: f64 = row_sums.iter().sum();
    let mut statistic = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &count) in row.as_ref().iter().enumerate() {
            let expected = row_sums[i] * col_sums[j] / total;
            let diff = count as f64 - expected;
            statistic += diff * diff / expected;
        }
    }
    let df = ((rows - 1) * (cols - 1)) as u32;
    if df == 0 {
        return Ok(ChiSquare {
            statistic: 0.0,
            df,
            p: 1.0,
        });
    }
    // proportional rows can leave rounding residue around 1e-15
    if statistic < 1e-12 {
        statistic = 0.0;
    }
    Ok(ChiSquare {
        statistic,
        df,
        p: chi2_sf(statistic, df)?,
    })
}
