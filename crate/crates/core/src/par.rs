//! Order-preserving data-parallel helpers.
//!
//! Every helper collects results in index order, so the output is identical
//! whether the work runs on the rayon pool or sequentially. With the
//! `parallel` feature disabled, or after `set_parallel(false)`, everything
//! runs on the calling thread.

use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Runtime switch used by the benches to compare both execution paths.
pub fn set_parallel(enabled: bool) {
    PARALLEL.store(enabled, Ordering::SeqCst);
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(Ordering::SeqCst)
}

/// `(0..n).map(f).collect()`, possibly on the thread pool.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel_enabled() && n > 1 {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    (0..n).map(f).collect()
}

/// Maps over a slice, preserving order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    map_range(items.len(), |i| f(&items[i]))
}

/// First index (in order) where `f` yields `Some`, with its payload.
///
/// All indices are evaluated in parallel mode; the lowest failing index wins so
/// reports do not depend on scheduling.
pub fn first_some<T, F>(n: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel_enabled() && n > 1 {
            use rayon::prelude::*;
            return (0..n)
                .into_par_iter()
                .filter_map(|i| f(i).map(|t| (i, t)))
                .min_by_key(|(i, _)| *i);
        }
    }
    (0..n).find_map(|i| f(i).map(|t| (i, t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree() {
        let f = |i: usize| i * i + 1;
        set_parallel(false);
        let a = map_range(1000, f);
        let x = first_some(1000, |i| (i % 97 == 96).then_some(i));
        set_parallel(true);
        let b = map_range(1000, f);
        let y = first_some(1000, |i| (i % 97 == 96).then_some(i));
        assert_eq!(a, b);
        assert_eq!(x, y);
        assert_eq!(x, Some((96, 96)));
    }
}
