//! Experiment harness: replication, reports, configuration and dispatch.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::Config;
pub use experiments::{run_experiment, EXPERIMENTS};
pub use report::{emit_report, ExperimentReport, Format, Table};

use rayon::prelude::*;

use crate::ensembles::{seed_derive, RngStream};

/// Runs `f` on replicate streams `0..n` of `seed`; results come back in
/// index order whatever the number of worker threads.
pub fn replicate<T, F>(seed: u64, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngStream, usize) -> T + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed_derive(seed, i as u64);
            f(&mut rng, i)
        })
        .collect()
}
