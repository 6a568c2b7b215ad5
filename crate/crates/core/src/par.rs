//! Data-parallel mapping with a sequential fallback.
//!
//! With the `parallel` feature (on by default) work can be spread over the
//! rayon pool; without it every map runs on the calling thread. Results are
//! always returned in input order.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[cfg(feature = "parallel")]
    Rayon,
}

impl Default for Parallelism {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        return Parallelism::Rayon;
        #[cfg(not(feature = "parallel"))]
        return Parallelism::Sequential;
    }
}

pub fn map_ordered<T, R, F>(mode: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        Parallelism::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
    }
}
