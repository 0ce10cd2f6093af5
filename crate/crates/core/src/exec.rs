//! Data-parallel driver for the batch loops (trial families, enumeration
//! chunks, frame post-processing).
//!
//! With the `parallel` feature (default) the `map_*` entry points fan out
//! over rayon; without it they fall back to plain sequential loops. The
//! `*_seq` twins are always sequential so callers and benches can compare
//! both paths in one build. Results are collected in index order, so the
//! output is identical either way; reductions over the collected values
//! stay sequential, which keeps every run bit-deterministic regardless of
//! thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to `0..len` and collects the results in order.
#[cfg(feature = "parallel")]
pub fn map_indices<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..len).into_par_iter().map(f).collect()
}

/// Applies `f` to `0..len` and collects the results in order.
#[cfg(not(feature = "parallel"))]
pub fn map_indices<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..len).map(f).collect()
}

/// Sequential twin of [`map_indices`], available under every feature set.
pub fn map_indices_seq<U, F>(len: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..len).map(f).collect()
}

/// Sizes the global worker pool. Takes effect at most once per process and
/// fails if a pool already exists; the sequential build accepts the call and
/// ignores it. Results never depend on the pool size.
#[cfg(feature = "parallel")]
pub fn configure_threads(threads: usize) -> crate::Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| crate::Error::Config(format!("worker pool: {e}")))
}

/// Sizes the global worker pool. Takes effect at most once per process and
/// fails if a pool already exists; the sequential build accepts the call and
/// ignores it. Results never depend on the pool size.
#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_threads: usize) -> crate::Result<()> {
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let par = map_indices(257, |i| i * i);
        let seq = map_indices_seq(257, |i| i * i);
        assert_eq!(par, seq);
    }
}
