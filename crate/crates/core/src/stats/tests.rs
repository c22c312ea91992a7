//! Hypothesis tests and interval estimates.

use crate::error::{Result, WarError};
use serde::Serialize;
use statrs::distribution::{Beta, ChiSquared, ContinuousCDF};
use std::collections::BTreeMap;

/// Fewest increments a group needs to enter the grouped test.
pub const MIN_GROUP_COUNT: u64 = 100;

/// Upper tail `P(X >= x)` of a chi-square variable with `df` degrees of
/// freedom.
pub fn chi_square_sf(x: f64, df: f64) -> f64 {
    ChiSquared::new(df).expect("positive degrees of freedom").sf(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquare {
    pub n: u64,
    pub chi_sq: f64,
    pub df: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupChiSquare {
    pub group: u32,
    pub ups: u64,
    pub test: ChiSquare,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessReport {
    /// All increments pooled.
    pub overall: ChiSquare,
    /// One test per group with at least [`MIN_GROUP_COUNT`] increments.
    pub by_group: Vec<GroupChiSquare>,
    /// Sum of the per-group statistics against `df = #groups`.
    pub joint: Option<ChiSquare>,
    pub skipped_groups: usize,
}

impl FairnessReport {
    pub fn passes(&self, alpha: f64) -> bool {
        self.overall.p_value >= alpha && self.joint.as_ref().is_none_or(|j| j.p_value >= alpha)
    }
}

fn coin_chi(ups: u64, n: u64) -> ChiSquare {
    let d = 2.0 * ups as f64 - n as f64;
    let chi_sq = d * d / n as f64;
    ChiSquare {
        n,
        chi_sq,
        df: 1.0,
        p_value: chi_square_sf(chi_sq, 1.0),
    }
}

/// Goodness of fit of `±1` increments against a fair coin, pooled and,
/// when `groups` is given, per group (typically `|A_t|` before the step).
pub fn fairness_test(increments: &[i8], groups: Option<&[u32]>) -> Result<FairnessReport> {
    let n = increments.len() as u64;
    if n < MIN_GROUP_COUNT {
        return Err(WarError::InsufficientData(format!(
            "{n} increments, need at least {MIN_GROUP_COUNT}"
        )));
    }
    if increments.iter().any(|&d| d != 1 && d != -1) {
        return Err(WarError::OutOfRange("increments must be +1 or -1".into()));
    }
    let ups = increments.iter().filter(|&&d| d == 1).count() as u64;
    let overall = coin_chi(ups, n);

    let (mut by_group, mut joint, mut skipped) = (Vec::new(), None, 0);
    if let Some(groups) = groups {
        if groups.len() != increments.len() {
            return Err(WarError::OutOfRange("groups and increments differ in length".into()));
        }
        let mut tally: BTreeMap<u32, (u64, u64)> = BTreeMap::new();
        for (&d, &g) in increments.iter().zip(groups) {
            let e = tally.entry(g).or_default();
            e.1 += 1;
            if d == 1 {
                e.0 += 1;
            }
        }
        for (group, (ups, count)) in tally {
            if count < MIN_GROUP_COUNT {
                skipped += 1;
                continue;
            }
            by_group.push(GroupChiSquare {
                group,
                ups,
                test: coin_chi(ups, count),
            });
        }
        if by_group.is_empty() {
            return Err(WarError::InsufficientData(format!(
                "no group has {MIN_GROUP_COUNT} increments"
            )));
        }
        let chi_sq: f64 = by_group.iter().map(|g| g.test.chi_sq).sum();
        let df = by_group.len() as f64;
        joint = Some(ChiSquare {
            n,
            chi_sq,
            df,
            p_value: chi_square_sf(chi_sq, df),
        });
    }
    Ok(FairnessReport {
        overall,
        by_group,
        joint,
        skipped_groups: skipped,
    })
}

/// Clopper-Pearson interval for a binomial proportion.
pub fn binomial_ci(successes: u64, trials: u64, level: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let alpha = 1.0 - level;
    let (x, n) = (successes as f64, trials as f64);
    let lo = if successes == 0 {
        0.0
    } else {
        Beta::new(x, n - x + 1.0).unwrap().inverse_cdf(alpha / 2.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        Beta::new(x + 1.0, n - x).unwrap().inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo, hi)
}

#[cfg(test)]
mod checks {
    use super::*;

    #[test]
    fn chi_square_reference_values() {
        // 3.841459 is the 95% point of chi-square(1).
        assert!((chi_square_sf(3.841_458_820_694_124, 1.0) - 0.05).abs() < 1e-9);
        assert!((chi_square_sf(0.0, 3.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn balanced_increments_pass() {
        let inc: Vec<i8> = (0..1000).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let groups: Vec<u32> = (0..1000).map(|i| (i / 2 % 3) as u32).collect();
        let r = fairness_test(&inc, Some(&groups)).unwrap();
        assert_eq!(r.overall.chi_sq, 0.0);
        assert_eq!(r.by_group.len(), 3);
        assert!(r.passes(0.001));
    }

    #[test]
    fn biased_increments_fail() {
        let inc: Vec<i8> = (0..1000).map(|i| if i % 3 == 0 { -1 } else { 1 }).collect();
        let r = fairness_test(&inc, None).unwrap();
        assert!(r.overall.p_value < 1e-6);
        assert!(!r.passes(0.001));
    }

    #[test]
    fn needs_data() {
        assert!(fairness_test(&[1, -1], None).is_err());
        assert!(fairness_test(&[2; 200], None).is_err());
    }

    #[test]
    fn clopper_pearson() {
        let (lo, hi) = binomial_ci(50, 100, 0.95);
        // Reference: 0.3983, 0.6017.
        assert!((lo - 0.398_321).abs() < 1e-5 && (hi - 0.601_679).abs() < 1e-5);
        assert_eq!(binomial_ci(0, 10, 0.95).0, 0.0);
        // No successes: the upper bound solves (1 - p)^n = 0.025.
        let hi = binomial_ci(0, 10, 0.95).1;
        assert!((hi - (1.0 - 0.025f64.powf(0.1))).abs() < 1e-9, "{hi}");
        assert_eq!(binomial_ci(10, 10, 0.95).1, 1.0);
    }
}
