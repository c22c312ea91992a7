use crate::error::{Result, WarError};
use serde::Serialize;

/// Equal-width histogram. Bin `i` covers `[edges[i], edges[i+1])`; the last
/// bin is closed on the right.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramData {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

pub fn histogram(samples: &[f64], bin_count: usize) -> Result<HistogramData> {
    if samples.is_empty() {
        return Err(WarError::EmptySample);
    }
    if bin_count == 0 {
        return Err(WarError::OutOfRange("bin count must be at least 1".into()));
    }
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // A constant sample gets unit-width bins starting at its value.
    let width = if max > min { (max - min) / bin_count as f64 } else { 1.0 };
    let bin_edges: Vec<f64> = (0..=bin_count)
        .map(|i| {
            if i == bin_count && max > min {
                max
            } else {
                min + i as f64 * width
            }
        })
        .collect();
    let mut counts = vec![0u64; bin_count];
    for &x in samples {
        let i = (((x - min) / width) as usize).min(bin_count - 1);
        counts[i] += 1;
    }
    Ok(HistogramData { bin_edges, counts })
}

impl HistogramData {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}
