use omviz_core::stats::{
    adjusted_mean, bonferroni, box_stats, chi2_independence, chi2_sf, kruskal_wallis, mann_whitney,
    relative_error, AnalysisConfig, PMethod,
};
use proptest::prelude::*;

/// Two-sided permutation p of the Mann–Whitney U by enumerating every split
/// of the pooled sample, counting U pairwise.
fn exact_mw_oracle(xs: &[f64], ys: &[f64]) -> f64 {
    let pooled: Vec<f64> = xs.iter().chain(ys).copied().collect();
    let (n1, n) = (xs.len(), pooled.len());
    let u_of = |mask: u32| {
        let mut u = 0.0;
        for i in (0..n).filter(|i| mask >> i & 1 == 1) {
            for j in (0..n).filter(|j| mask >> j & 1 == 0) {
                u += match pooled[i].partial_cmp(&pooled[j]).unwrap() {
                    std::cmp::Ordering::Greater => 1.0,
                    std::cmp::Ordering::Equal => 0.5,
                    std::cmp::Ordering::Less => 0.0,
                };
            }
        }
        u
    };
    let centre = (n1 * (n - n1)) as f64 / 2.0;
    let observed = (u_of((1u32 << n1) - 1) - centre).abs();
    let (mut extreme, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == n1 {
            total += 1;
            if (u_of(mask) - centre).abs() >= observed - 1e-9 {
                extreme += 1;
            }
        }
    }
    extreme as f64 / total as f64
}

/// Closed-form chi-squared survival function for integer degrees of freedom.
fn chi2_sf_oracle(x: f64, df: u32) -> f64 {
    let h = x / 2.0;
    if df.is_multiple_of(2) {
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..df / 2 {
            term *= h / k as f64;
            sum += term;
        }
        (-h).exp() * sum
    } else {
        let z = x.sqrt();
        // erfc(z / sqrt 2) via the complementary normal tail, by Simpson integration
        let steps = 20_000;
        let upper = z + 40.0;
        let width = (upper - z) / steps as f64;
        let density = |t: f64| (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut tail = density(z) + density(upper);
        for i in 1..steps {
            tail += density(z + i as f64 * width) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let mut sf = 2.0 * tail * width / 3.0;
        let mut term = (2.0 * x / std::f64::consts::PI).sqrt() * (-h).exp();
        for k in 0..(df - 1) / 2 {
            sf += term;
            term *= x / (2 * k + 3) as f64;
        }
        sf
    }
}

fn small_sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0u8..6).prop_map(f64::from), 1..=8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mann_whitney_small_samples_match_enumeration(xs in small_sample(), ys in small_sample()) {
        let result = mann_whitney(&xs, &ys).unwrap();
        let oracle = exact_mw_oracle(&xs, &ys);
        prop_assert_eq!(result.method, PMethod::Exact);
        prop_assert!((result.p - oracle).abs() < 1e-9, "p {} vs oracle {}", result.p, oracle);
    }

    #[test]
    fn mann_whitney_u_counts_pairs(xs in small_sample(), ys in small_sample()) {
        let u = mann_whitney(&xs, &ys).unwrap().u;
        let mut pairs = 0.0;
        for x in &xs {
            for y in &ys {
                pairs += if x > y { 1.0 } else if x == y { 0.5 } else { 0.0 };
            }
        }
        prop_assert!((u - pairs).abs() < 1e-9);
    }

    #[test]
    fn kruskal_wallis_is_rank_invariant(
        groups in prop::collection::vec(prop::collection::vec(0.5f64..100.0, 1..10), 2..5)
    ) {
        let transformed: Vec<Vec<f64>> = groups.iter().map(|g| g.iter().map(|v| v.ln() * 3.0 + 7.0).collect()).collect();
        let a = kruskal_wallis(&groups).unwrap();
        let b = kruskal_wallis(&transformed).unwrap();
        prop_assert!((a.h - b.h).abs() < 1e-9);
        prop_assert!((a.p - b.p).abs() < 1e-12);
    }

    #[test]
    fn kruskal_wallis_without_ties_matches_textbook_formula(
        perm in Just((1..=15).map(f64::from).collect::<Vec<_>>()).prop_shuffle(),
        cut1 in 1usize..7, cut2 in 8usize..14,
    ) {
        let groups = [perm[..cut1].to_vec(), perm[cut1..cut2].to_vec(), perm[cut2..].to_vec()];
        let n = 15.0;
        let sum: f64 = groups.iter().map(|g| g.iter().sum::<f64>().powi(2) / g.len() as f64).sum();
        let h = 12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0);
        let result = kruskal_wallis(&groups).unwrap();
        prop_assert!((result.h - h).abs() < 1e-9);
        prop_assert_eq!(result.df, 2);
        prop_assert!((result.p - (-h / 2.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn chi2_sf_matches_closed_forms(x in 0.0f64..80.0, df in 1u32..20) {
        let p = chi2_sf(x, df).unwrap();
        prop_assert!((p - chi2_sf_oracle(x, df)).abs() < 1e-9, "x={} df={}: {} vs {}", x, df, p, chi2_sf_oracle(x, df));
    }

    #[test]
    fn chi2_sf_is_monotone(x in 0.0f64..60.0, dx in 0.0f64..5.0, df in 1u32..16) {
        let p = chi2_sf(x, df).unwrap();
        prop_assert!(chi2_sf(x + dx, df).unwrap() <= p + 1e-15);
        prop_assert!(chi2_sf(x, df + 1).unwrap() >= p - 1e-15);
    }

    #[test]
    fn relative_error_is_scale_invariant(r in 0.0f64..1e6, c in 1e-3f64..1e6, k in 1e-3f64..1e3) {
        let a = relative_error(r, c).unwrap();
        let b = relative_error(k * r, k * c).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
    }

    #[test]
    fn proportional_tables_are_independent(
        base in prop::collection::vec(1u64..20, 2..6),
        factors in prop::collection::vec(1u64..5, 2..6),
    ) {
        let table: Vec<Vec<u64>> = factors.iter().map(|f| base.iter().map(|b| b * f).collect()).collect();
        let result = chi2_independence(&table).unwrap();
        prop_assert_eq!(result.statistic, 0.0);
        prop_assert_eq!(result.p, 1.0);
    }

    #[test]
    fn box_stats_match_sorted_interpolation(xs in prop::collection::vec(-100.0f64..100.0, 1..40)) {
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let h = (sorted.len() - 1) as f64 * p;
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(sorted.len() - 1);
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        };
        let stats = box_stats(&xs).unwrap();
        prop_assert!((stats.q1 - q(0.25)).abs() < 1e-9);
        prop_assert!((stats.median - q(0.5)).abs() < 1e-9);
        prop_assert!((stats.q3 - q(0.75)).abs() < 1e-9);
        let iqr = stats.q3 - stats.q1;
        let (lo, hi) = (stats.q1 - 1.5 * iqr, stats.q3 + 1.5 * iqr);
        let outliers: Vec<f64> = sorted.iter().copied().filter(|&v| v < lo || v > hi).collect();
        let mut reported = stats.outliers.clone();
        reported.sort_by(f64::total_cmp);
        prop_assert_eq!(reported, outliers);
        prop_assert!(stats.whisker_low >= lo && stats.whisker_high <= hi);
    }
}

#[test]
fn identification_omnibus_pair() {
    assert!((chi2_sf(23.582, 4).unwrap() - 9.686e-5).abs() < 1e-7);
}

#[test]
fn expertise_pair_follows_the_closed_form() {
    // The printed p for this statistic is 0.4431; the closed form gives 0.44130,
    // consistent with swapped digits in the printed value.
    let p = chi2_sf(16.168, 16).unwrap();
    assert!((p - chi2_sf_oracle(16.168, 16)).abs() < 1e-12);
    assert!((p - 0.4413).abs() < 5e-5);
}

#[test]
fn worked_error_examples() {
    assert_eq!(relative_error(10.0, 100.0).unwrap(), 0.9);
    assert_eq!(relative_error(1000.0, 10000.0).unwrap(), 0.9);
    assert_eq!(relative_error(7.5, 7.5).unwrap(), 0.0);
    assert!(relative_error(1.0, 0.0).is_err());
}

#[test]
fn hand_computed_fixtures() {
    let table = chi2_independence(&[[10u64, 0], [0, 10]]).unwrap();
    assert!((table.statistic - 20.0).abs() < 1e-12);
    assert_eq!(table.df, 1);
    let five = chi2_independence(&[[1u64, 2, 3, 4, 5]; 5]).unwrap();
    assert_eq!(five.df, 16);

    let constant = kruskal_wallis(&[[2.0, 2.0], [2.0, 2.0], [2.0, 2.0]]).unwrap();
    assert_eq!(constant.h, 0.0);
    assert_eq!(constant.p, 1.0);

    let separated = mann_whitney(&[1.0, 2.0, 3.0, 4.0], &[5.0, 6.0, 7.0, 8.0]).unwrap();
    assert_eq!(separated.u, 0.0);
    assert!((separated.p - 2.0 / 70.0).abs() < 1e-12);
    let same = mann_whitney(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
    assert!((same.p - 1.0).abs() < 1e-12);

    assert_eq!(adjusted_mean(&[1.0, 1.0, 1.0, 100.0]).unwrap(), 1.0);
    assert_eq!(adjusted_mean(&[4.0]).unwrap(), 4.0);

    let cfg = AnalysisConfig::default();
    assert!((bonferroni(0.004, &cfg) - 0.04).abs() < 1e-15);
    assert_eq!(bonferroni(0.5, &cfg), 1.0);
    assert_eq!(bonferroni(0.0, &cfg), 0.0);
}

#[test]
fn large_samples_use_the_normal_approximation() {
    let xs: Vec<f64> = (0..20).map(f64::from).collect();
    let ys: Vec<f64> = (10..30).map(f64::from).collect();
    let result = mann_whitney(&xs, &ys).unwrap();
    assert_eq!(result.method, PMethod::Normal);
    assert!(result.p < 0.01);
}
