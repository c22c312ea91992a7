//! Monte Carlo harness and the statistics used to judge its output.

mod harness;
mod histogram;
mod summary;
mod tests;

pub use harness::{default_workers, run_trials, WORKERS_ENV};
pub use histogram::{histogram, HistogramData};
pub use summary::{compensated_sum, summarize, summarize_outcomes, SampleStats};
pub use tests::{
    binomial_ci, chi_square_sf, fairness_test, ChiSquare, FairnessReport, GroupChiSquare, MIN_GROUP_COUNT,
};
