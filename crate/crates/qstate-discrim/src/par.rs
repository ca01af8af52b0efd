//! Thin wrappers that switch the data-parallel inner loops between rayon
//! and a sequential fallback, controlled by the `parallel` feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Order-preserving parallel map.
pub fn map_collect<T, F>(n: usize, map: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(map).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(map).collect()
    }
}
