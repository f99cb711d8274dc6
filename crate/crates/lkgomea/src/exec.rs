//! Execution-mode switch between the rayon data-parallel code paths and
//! their sequential fallbacks.
//!
//! Only order-independent, per-item pure work is parallelized (per-solution
//! neighborhoods, per-kernel model learning, exhaustive enumeration chunks,
//! experiment cells), so both modes produce identical results. The `parallel`
//! cargo feature gates the rayon dependency; at runtime [`set_parallel`]
//! selects the active mode, which is what the bench suite uses to compare
//! the two paths in a single build.

use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Whether the rayon code paths are compiled in and currently enabled.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(Ordering::Relaxed)
}

/// Switches between the rayon and sequential code paths at runtime.
/// A no-op unless the `parallel` feature is compiled in.
pub fn set_parallel(enabled: bool) {
    PARALLEL.store(enabled, Ordering::Relaxed);
}

/// `(0..n).map(f)` collected in index order, fanned out over the rayon pool
/// when parallel execution is enabled.
pub fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}
