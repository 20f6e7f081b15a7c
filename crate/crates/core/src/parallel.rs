//! Trial-level parallel map that stays deterministic: results are returned in
//! trial order no matter how the pool schedules them. With the `parallel`
//! feature disabled the same API runs serially (used by the wasm build).

/// Map `f` over `0..count`, preserving index order in the output.
pub fn map_trials<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Configure the global worker pool size. Returns false when the pool was
/// already initialised (harmless; first caller wins).
pub fn configure_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        true
    }
}
