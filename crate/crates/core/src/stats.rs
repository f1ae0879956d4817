//! Two-sample Mann-Whitney U test.
//!
//! Used by the tuner to decide whether one parameter set's run outcomes
//! stochastically dominate another's, and by the harness for head-to-head
//! reporting. Ties get average ranks. Small problems (`n_a * n_b <= 64`) take
//! the exact route: the full permutation distribution of U over all ways of
//! assigning the pooled ranks to group A. Larger problems use the normal
//! approximation with tie-corrected variance and continuity correction.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Largest `n_a * n_b` handled by exact enumeration.
pub const EXACT_LIMIT: usize = 64;

/// Outcome of a two-sided Mann-Whitney U test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UTestResult {
    /// `min(U_A, U_B)`; at most `n_a * n_b`.
    pub u_statistic: f64,
    /// Two-sided p-value in [0, 1].
    pub p_value: f64,
    /// Whether `p_value < alpha`.
    pub significant: bool,
}

/// Runs the two-sided test at significance level `alpha`.
pub fn mann_whitney_u(sample_a: &[f64], sample_b: &[f64], alpha: f64) -> Result<UTestResult> {
    if sample_a.is_empty() || sample_b.is_empty() {
        return Err(Error::InvalidInput(
            "Mann-Whitney U requires two non-empty samples".into(),
        ));
    }
    let (u, p) = if sample_a.len() * sample_b.len() <= EXACT_LIMIT {
        u_and_p_exact(sample_a, sample_b)
    } else {
        u_and_p_approx(sample_a, sample_b)
    };
    Ok(UTestResult {
        u_statistic: u,
        p_value: p,
        significant: p < alpha,
    })
}

/// Average ranks of the pooled samples, A entries first.
fn pooled_ranks(sample_a: &[f64], sample_b: &[f64]) -> Vec<f64> {
    let n = sample_a.len() + sample_b.len();
    let mut order: Vec<usize> = (0..n).collect();
    let value = |i: usize| {
        if i < sample_a.len() {
            sample_a[i]
        } else {
            sample_b[i - sample_a.len()]
        }
    };
    order.sort_by(|&i, &j| value(i).partial_cmp(&value(j)).expect("non-NaN samples"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && value(order[j]) == value(order[i]) {
            j += 1;
        }
        // positions i..j (0-based) share the average 1-based rank
        let shared = (i + j + 1) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = shared;
        }
        i = j;
    }
    ranks
}

fn u_pair(ranks: &[f64], n_a: usize, n_b: usize) -> (f64, f64) {
    let rank_sum_a: f64 = ranks[..n_a].iter().sum();
    let u_a = rank_sum_a - (n_a * (n_a + 1)) as f64 / 2.0;
    let u_b = (n_a * n_b) as f64 - u_a;
    (u_a, u_b)
}

/// Exact branch: enumerate every way to choose which pooled ranks belong to
/// group A; the two-sided p-value is the fraction of choices whose U is at
/// least as far from the null mean as the observed one.
fn u_and_p_exact(sample_a: &[f64], sample_b: &[f64]) -> (f64, f64) {
    let n_a = sample_a.len();
    let n_b = sample_b.len();
    let ranks = pooled_ranks(sample_a, sample_b);
    let (u_a, u_b) = u_pair(&ranks, n_a, n_b);
    let observed = u_a.min(u_b);
    let mean = (n_a * n_b) as f64 / 2.0;
    let observed_dev = (u_a - mean).abs();

    // Sorted pooled ranks; choosing n_a of them determines U_A.
    let mut pool = ranks.clone();
    pool.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut extreme = 0u64;
    let mut total = 0u64;
    let mut chosen = Vec::with_capacity(n_a);
    enumerate_subsets(&pool, n_a, 0, 0.0, &mut chosen, &mut |rank_sum| {
        total += 1;
        let u = rank_sum - (n_a * (n_a + 1)) as f64 / 2.0;
        if (u - mean).abs() >= observed_dev - 1e-9 {
            extreme += 1;
        }
    });
    (observed, extreme as f64 / total as f64)
}

fn enumerate_subsets(
    pool: &[f64],
    take: usize,
    start: usize,
    sum: f64,
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(f64),
) {
    if chosen.len() == take {
        visit(sum);
        return;
    }
    let needed = take - chosen.len();
    for i in start..=pool.len() - needed {
        chosen.push(i);
        enumerate_subsets(pool, take, i + 1, sum + pool[i], chosen, visit);
        chosen.pop();
    }
}

/// Normal approximation with tie-corrected variance and continuity
/// correction. Degenerate pools (all values tied) report p = 1.
fn u_and_p_approx(sample_a: &[f64], sample_b: &[f64]) -> (f64, f64) {
    let n_a = sample_a.len() as f64;
    let n_b = sample_b.len() as f64;
    let n = n_a + n_b;
    let ranks = pooled_ranks(sample_a, sample_b);
    let (u_a, u_b) = u_pair(&ranks, sample_a.len(), sample_b.len());
    let u = u_a.min(u_b);
    let mean = n_a * n_b / 2.0;

    // Tie correction: sum of t^3 - t over tie groups.
    let mut sorted = ranks.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let variance = n_a * n_b / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if variance <= 0.0 {
        return (u, 1.0);
    }
    // U <= mean by construction; the 0.5 shifts toward the mean.
    let z = (u - mean + 0.5) / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).unwrap();
    let p = (2.0 * normal.cdf(z)).min(1.0);
    (u, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn complete_separation_gives_u_zero() {
        let r = mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], 0.05).unwrap();
        assert_eq!(r.u_statistic, 0.0);
        // |U - 4.5| >= 4.5 happens for U in {0, 9}: 2 of C(6,3) = 20 subsets.
        assert!((r.p_value - 0.1).abs() < 1e-12);
        assert!(!r.significant);
    }

    #[test]
    fn identical_samples_are_not_significant() {
        let a = [0.4, 0.5, 0.6];
        let r = mann_whitney_u(&a, &a, 0.05).unwrap();
        assert_eq!(r.u_statistic, 4.5);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        assert!(!r.significant);
    }

    #[test]
    fn interleaved_case_frozen_from_enumeration() {
        // A = [1,2,4], B = [3,5,6]: ranks of A are {1,2,4}, so U_A = 1 and
        // U_B = 8. Enumerating all 20 rank subsets puts 4 of them (U in
        // {0,1,8,9}) at least as far from 4.5, giving p = 0.2.
        let r = mann_whitney_u(&[1.0, 2.0, 4.0], &[3.0, 5.0, 6.0], 0.05).unwrap();
        assert_eq!(r.u_statistic, 1.0);
        assert!((r.p_value - 0.2).abs() < 1e-12);
    }

    #[test]
    fn tied_values_share_average_ranks() {
        let ranks = pooled_ranks(&[1.0, 2.0, 2.0], &[2.0, 3.0]);
        assert_eq!(ranks, vec![1.0, 3.0, 3.0, 3.0, 5.0]);
    }

    #[test]
    fn approx_branch_detects_a_clear_shift() {
        let a: Vec<f64> = (0..40).map(f64::from).collect();
        let b: Vec<f64> = (0..40).map(|i| f64::from(i) + 30.0).collect();
        let r = mann_whitney_u(&a, &b, 0.05).unwrap();
        assert!(r.significant, "p = {}", r.p_value);
    }

    #[test]
    fn approx_branch_all_tied_reports_one() {
        let a = vec![1.0; 20];
        let b = vec![1.0; 20];
        let r = mann_whitney_u(&a, &b, 0.05).unwrap();
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn exact_and_approx_agree_near_the_switchover() {
        // 8 x 8 = 64 sits on the exact side; force the approximation on the
        // same data and compare.
        let a = [0.1, 0.4, 0.55, 0.6, 0.61, 0.7, 0.75, 0.9];
        let b = [0.2, 0.3, 0.35, 0.5, 0.52, 0.58, 0.72, 0.8];
        let (u_exact, p_exact) = u_and_p_exact(&a, &b);
        let (u_approx, p_approx) = u_and_p_approx(&a, &b);
        assert_eq!(u_exact, u_approx);
        assert!(
            (p_exact - p_approx).abs() <= 0.02,
            "exact {p_exact} vs approx {p_approx}"
        );
    }

    #[test]
    fn empty_sample_is_an_error() {
        assert!(mann_whitney_u(&[], &[1.0], 0.05).is_err());
        assert!(mann_whitney_u(&[1.0], &[], 0.05).is_err());
    }

    proptest! {
        #[test]
        fn u_parts_sum_to_product(
            a in proptest::collection::vec(0.0f64..1.0, 1..20),
            b in proptest::collection::vec(0.0f64..1.0, 1..20),
        ) {
            let ranks = pooled_ranks(&a, &b);
            let (u_a, u_b) = u_pair(&ranks, a.len(), b.len());
            prop_assert!((u_a + u_b - (a.len() * b.len()) as f64).abs() < 1e-9);
            prop_assert!(u_a >= -1e-9 && u_b >= -1e-9);
        }

        #[test]
        fn swapping_samples_changes_nothing(
            a in proptest::collection::vec(0.0f64..1.0, 1..12),
            b in proptest::collection::vec(0.0f64..1.0, 1..12),
        ) {
            let r1 = mann_whitney_u(&a, &b, 0.05).unwrap();
            let r2 = mann_whitney_u(&b, &a, 0.05).unwrap();
            prop_assert_eq!(r1.u_statistic, r2.u_statistic);
            prop_assert!((r1.p_value - r2.p_value).abs() < 1e-12);
        }
    }
}
