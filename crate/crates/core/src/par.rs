//! Data-parallel helpers with a sequential fallback.
//!
//! Batch operations (snapshots, per-person mobility, per-work analytics,
//! quad rendering) take an [`Execution`]. With the `parallel` feature
//! (default) `Execution::Parallel` fans out over rayon's pool; without it,
//! both variants run on the calling thread. Results are identical either
//! way, and always in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(&self) -> bool {
        cfg!(feature = "parallel") && *self == Execution::Parallel
    }

    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn filter<T, F>(self, items: &[T], keep: F) -> Vec<T>
    where
        T: Sync + Send + Clone,
        F: Fn(&T) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().filter(|x| keep(x)).cloned().collect();
        }
        items.iter().filter(|x| keep(x)).cloned().collect()
    }

    /// Map with early exit on the first error (lowest index wins).
    pub fn try_map<T, U, E, F>(self, items: &[T], f: F) -> Result<Vec<U>, E>
    where
        T: Sync,
        U: Send,
        E: Send,
        F: Fn(&T) -> Result<U, E> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }

    pub fn sort<T: Ord + Send>(self, items: &mut [T]) {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            items.par_sort();
            return;
        }
        items.sort();
    }
}
