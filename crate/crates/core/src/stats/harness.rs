use crate::error::{Result, WarError};
use crate::rng::RngStream;
use rayon::prelude::*;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "WARLAB_WORKERS";

/// Worker count from `WARLAB_WORKERS`, else the number of logical CPUs.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `n_trials` independent trials on `workers` threads. Trial `i` gets
/// `RngStream::new(seed, i)`; the result is ordered by trial index and is
/// identical for every worker count.
pub fn run_trials<R, F>(n_trials: u64, seed: u64, workers: usize, trial: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&mut RngStream) -> Result<R> + Sync,
{
    if n_trials == 0 {
        return Err(WarError::InvalidConfig("trial count must be at least 1".into()));
    }
    if workers == 0 {
        return Err(WarError::InvalidConfig("worker count must be at least 1".into()));
    }
    let run = |i: u64| trial(&mut RngStream::new(seed, i));
    if workers == 1 {
        return (0..n_trials).map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| WarError::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| (0..n_trials).into_par_iter().map(run).collect())
}
