//! Execution strategy for the data-parallel loops (frontier sweeps,
//! optimizer restarts, shot batches).
//!
//! Results are always collected in index order, so both strategies give
//! bitwise-identical output. Without the `parallel` feature,
//! [`Exec::Parallel`] runs sequentially.

/// How to run an indexed batch of independent jobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// `(0..n).map(job)`, collected in order.
    pub fn map<T, F>(self, n: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(job).collect(),
            Exec::Parallel => par_map(n, job),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(n: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(job).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, F>(n: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(job).collect()
}
