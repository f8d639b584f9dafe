//! Execution policy for the data-parallel loops.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] maps through rayon;
//! without it only [`Exec::Sequential`] exists. Every parallel map collects in
//! index order and each item is a pure function of its index, so results do not
//! depend on the policy or on the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Exec::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Exec::Sequential
        }
    }
}

/// `(0..n).map(f).collect()` under the given policy.
pub fn map_range<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Exec::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

/// `items.iter().map(f).collect()` under the given policy.
pub fn map_slice<S, T, F>(exec: Exec, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    match exec {
        Exec::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let f = |i: usize| ((i as f64).sin() * 1e3).to_bits();
        let seq = map_range(Exec::Sequential, 1000, f);
        let def = map_range(Exec::default(), 1000, f);
        assert_eq!(seq, def);
        let xs: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(map_slice(Exec::Sequential, &xs, |x| x * 2.0), map_slice(Exec::default(), &xs, |x| x * 2.0));
    }
}
