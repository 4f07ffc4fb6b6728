//! Deterministic parallel helpers.
//!
//! Work is cut into chunks whose boundaries depend only on the input size, the
//! chunks run on the rayon pool, and partial results are combined in chunk
//! order. The result is therefore independent of the number of worker threads.

use rayon::prelude::*;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "BHT_LAB_THREADS";

/// Read `BHT_LAB_THREADS`; `Ok(None)` when unset.
pub fn threads_from_env() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got {s:?}")),
        },
    }
}

/// Configure the global rayon pool once; later calls are ignored.
pub fn init_global_pool(threads: Option<usize>) {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let _ = builder.build_global();
}

/// Map fixed-size chunks of `0..len` in parallel and return the chunk results in order.
pub fn map_chunks<T, F>(len: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let count = len.div_ceil(chunk);
    (0..count)
        .into_par_iter()
        .map(|c| f(c * chunk..((c + 1) * chunk).min(len)))
        .collect()
}

/// Chunk size giving at most `max_chunks` chunks.
pub fn chunk_size(len: usize, max_chunks: usize) -> usize {
    len.div_ceil(max_chunks.max(1)).max(1)
}

/// Parallel map over indices, results in index order.
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).into_par_iter().map(f).collect()
}
