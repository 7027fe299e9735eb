//! Thin switch between rayon and sequential execution for the grid-sized
//! loops. Everything funnels through these helpers so the `parallel` feature
//! is a pure drop-in.

#[cfg(feature = "parallel")]
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn max_reduce<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).reduce(|| f64::NEG_INFINITY, f64::max)
}

#[cfg(not(feature = "parallel"))]
pub fn max_reduce<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    (0..n).map(f).fold(f64::NEG_INFINITY, f64::max)
}

/// Sequential versions, always available so benches can compare.
pub mod seq {
    pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
    where
        F: Fn(usize) -> T,
    {
        (0..n).map(f).collect()
    }

    pub fn max_reduce<F>(n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64,
    {
        (0..n).map(f).fold(f64::NEG_INFINITY, f64::max)
    }
}
