//! Grid execution: rayon when the `parallel` feature is on, a plain loop
//! otherwise.
//!
//! Results always come back in input order, and every reduction over them is
//! done sequentially afterwards, so output is bit-identical whichever
//! strategy ran it.

use crate::error::{Result, ZetaError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            Exec::Parallel => items.iter().map(f).collect(),
        }
    }

    /// Like [`Exec::map`] for fallible work; the first error in input order
    /// wins.
    pub fn try_map<T, U, F>(self, items: &[T], f: F) -> Result<Vec<U>>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> Result<U> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }
}

/// Caps the global worker pool. Only the first call has an effect.
pub fn configure_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Err(ZetaError::config("thread count must be positive"));
    }
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| ZetaError::config(e.to_string()))?;
    }
    Ok(())
}
