//! Execution strategy for data-parallel loops.
//!
//! Sampling a curve on a parameter grid and reducing a batch of curves are
//! embarrassingly parallel. With the `parallel` feature (on by default) those
//! loops run on the rayon global pool; without it, [`Execution::Parallel`]
//! quietly falls back to the sequential path so call sites never need `cfg`.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this strategy actually runs on multiple threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Parameter value of sample `j` on the uniform grid `t_j = j / (samples - 1)`.
///
/// The endpoints are exactly 0 and 1.
#[inline]
pub fn grid_param(j: usize, samples: usize) -> f64 {
    if j + 1 >= samples {
        1.0
    } else {
        j as f64 / (samples - 1) as f64
    }
}

/// Evaluates `f` at every point of the uniform grid, in grid order.
pub fn map_grid<T, F>(samples: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync + Send,
{
    map_indices(samples, exec, |j| f(grid_param(j, samples)))
}

/// Maps `f` over `0..len`, preserving order.
pub fn map_indices<T, F>(len: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// Maps `f` over a slice, preserving order.
pub fn map_slice<S, T, F>(items: &[S], exec: Execution, f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}
