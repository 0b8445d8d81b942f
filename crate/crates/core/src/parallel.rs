//! Deterministic fan-out over an index range.
//!
//! Work item `i` always produces the same value regardless of how many workers
//! run, and results come back in index order, so merged outputs never depend
//! on the worker count.

use std::num::NonZeroUsize;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "BOOLRAD_WORKERS";

pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(NonZeroUsize::get)
                .unwrap_or(1)
        })
}

/// Seed for the independent stream `stream` under the master seed `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

/// Evaluates `f(0), …, f(count-1)` on up to `workers` threads, each thread
/// taking one contiguous block of indices.
pub fn map_indexed<T, F>(count: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.max(1).min(count.max(1));
    if workers == 1 {
        return (0..count).map(&f).collect();
    }
    let chunk = count.div_ceil(workers);
    let f = &f;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let range = (w * chunk).min(count)..((w + 1) * chunk).min(count);
                scope.spawn(move || range.map(f).collect::<Vec<T>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}
