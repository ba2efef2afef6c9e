//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper returns results in index order, so output never depends on
//! the number of worker threads or on whether the `parallel` feature is on.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `true` when the crate was built with the `parallel` feature.
pub const PARALLEL: bool = cfg!(feature = "parallel");

/// Evaluates `f(0..len)` and collects the results in index order.
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Maps over a slice, preserving order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Returns the lowest index `i < len` for which `f(i)` is `Some`, with its value.
pub fn find_first<T, F>(len: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len)
            .into_par_iter()
            .filter_map(|i| f(i).map(|v| (i, v)))
            .find_first(|_| true)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).find_map(|i| f(i).map(|v| (i, v)))
    }
}

/// Splits `0..total` into contiguous chunks, folds each with `fold`, and
/// combines the partial results left to right with `combine`.
pub fn chunked_fold<A, F, C>(total: u64, chunk: u64, identity: A, fold: F, combine: C) -> A
where
    A: Send + Clone + Sync,
    F: Fn(std::ops::Range<u64>) -> A + Sync + Send,
    C: Fn(A, A) -> A + Sync + Send,
{
    let chunk = chunk.max(1);
    let chunks = total.div_ceil(chunk) as usize;
    let parts = map_indexed(chunks, |c| {
        let lo = c as u64 * chunk;
        fold(lo..(lo + chunk).min(total))
    });
    parts.into_iter().fold(identity, combine)
}
