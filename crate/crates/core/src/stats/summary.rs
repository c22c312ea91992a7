use crate::error::{Result, WarError};
use crate::record::Winner;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleStats {
    /// All trials, including truncated and drawn ones.
    pub n_trials: u64,
    /// Trials entering the moments and order statistics.
    pub n_samples: u64,
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
    /// Sample standard deviation (`n - 1` denominator).
    pub std: f64,
    pub std_err: f64,
    /// Normal-approximation 95% interval for the mean.
    pub ci95: (f64, f64),
    pub truncated_count: u64,
    pub draw_count: u64,
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Moments and order statistics of a non-empty sample. The sample is sorted
/// before accumulation, so the result does not depend on input order.
pub fn summarize(samples: &[f64]) -> Result<SampleStats> {
    if samples.is_empty() {
        return Err(WarError::EmptySample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let nf = n as f64;
    let mean = compensated_sum(sorted.iter().copied()) / nf;
    let var = if n > 1 {
        compensated_sum(sorted.iter().map(|x| (x - mean) * (x - mean))) / (nf - 1.0)
    } else {
        0.0
    };
    let std = var.sqrt();
    let std_err = std / nf.sqrt();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    Ok(SampleStats {
        n_trials: n as u64,
        n_samples: n as u64,
        mean,
        median,
        min: sorted[0],
        max: sorted[n - 1],
        std,
        std_err,
        ci95: (mean - 1.96 * std_err, mean + 1.96 * std_err),
        truncated_count: 0,
        draw_count: 0,
    })
}

/// Summarises game lengths; truncated and drawn games are counted but kept
/// out of the statistics.
pub fn summarize_outcomes(outcomes: impl IntoIterator<Item = (u64, Winner)>) -> Result<SampleStats> {
    let mut taus = Vec::new();
    let (mut total, mut truncated, mut draws) = (0u64, 0u64, 0u64);
    for (tau, winner) in outcomes {
        total += 1;
        match winner {
            Winner::Truncated => truncated += 1,
            Winner::Draw => draws += 1,
            _ => taus.push(tau as f64),
        }
    }
    let mut stats = summarize(&taus)?;
    stats.n_trials = total;
    stats.truncated_count = truncated;
    stats.draw_count = draws;
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_sample() {
        let s = summarize(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.median, s.max, s.min), (2.0, 2.0, 3.0, 1.0));
        assert_eq!(s.std, 1.0);
        assert!(s.ci95.0 <= s.mean && s.mean <= s.ci95.1);
        assert_eq!(summarize(&[4.0, 1.0, 3.0, 2.0]).unwrap().median, 2.5);
        assert_eq!(summarize(&[]), Err(WarError::EmptySample));
    }

    #[test]
    fn outcomes_exclude_undecided() {
        let s = summarize_outcomes(vec![
            (10, Winner::A),
            (20, Winner::B),
            (1000, Winner::Truncated),
            (5, Winner::Draw),
        ])
        .unwrap();
        assert_eq!(s.n_trials, 4);
        assert_eq!(s.n_samples, 2);
        assert_eq!(s.mean, 15.0);
        assert_eq!(s.max, 20.0);
        assert_eq!((s.truncated_count, s.draw_count), (1, 1));
    }

    #[test]
    fn compensation_recovers_small_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }

    proptest! {
        #[test]
        fn permutation_invariant(mut xs in prop::collection::vec(0.0f64..1e6, 1..200), seed in any::<u64>()) {
            let a = summarize(&xs).unwrap();
            let mut rng = crate::rng::RngStream::new(seed, 0);
            rng.shuffle(&mut xs);
            let b = summarize(&xs).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
