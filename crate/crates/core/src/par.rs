//! Chunked evaluation over integer ranges.
//!
//! With the `parallel` feature (default) chunks are spread over a rayon pool
//! of the requested size; otherwise, or when `jobs == 1`, they run in order on
//! the calling thread. Either way the results come back in chunk order, so
//! callers see identical output for every worker count.

/// Splits `[lo, hi]` into consecutive inclusive chunks of at most `size`.
pub fn chunks(lo: u64, hi: u64, size: u64) -> Vec<(u64, u64)> {
    assert!(size > 0);
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let mut a = lo;
    loop {
        let b = a.saturating_add(size - 1).min(hi);
        out.push((a, b));
        if b == hi {
            break;
        }
        a = b + 1;
    }
    out
}

/// Worker count to use when the caller does not specify one.
pub fn default_jobs() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Applies `f` to every chunk of `[lo, hi]` and returns the results in order.
pub fn map_chunks<T, F>(lo: u64, hi: u64, chunk: u64, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    let parts = chunks(lo, hi, chunk);
    if jobs <= 1 || parts.len() <= 1 {
        return parts.into_iter().map(|(a, b)| f(a, b)).collect();
    }
    run_parallel(parts, jobs, f)
}

#[cfg(feature = "parallel")]
fn run_parallel<T, F>(parts: Vec<(u64, u64)>, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    use rayon::prelude::*;

    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| parts.into_par_iter().map(|(a, b)| f(a, b)).collect()),
        Err(_) => parts.into_iter().map(|(a, b)| f(a, b)).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_parallel<T, F>(parts: Vec<(u64, u64)>, _jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    parts.into_iter().map(|(a, b)| f(a, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunking_covers_range() {
        assert_eq!(chunks(2, 10, 4), vec![(2, 5), (6, 9), (10, 10)]);
        assert_eq!(chunks(5, 5, 100), vec![(5, 5)]);
        assert!(chunks(6, 5, 1).is_empty());
        assert_eq!(chunks(u64::MAX - 1, u64::MAX, 8), vec![(u64::MAX - 1, u64::MAX)]);
    }

    #[test]
    fn order_is_independent_of_jobs() {
        let run = |jobs| map_chunks(1, 10_000, 97, jobs, |a, b| (a..=b).map(|x| x * x).sum::<u64>());
        let one = run(1);
        assert_eq!(run(4), one);
        assert_eq!(run(16), one);
    }
}
