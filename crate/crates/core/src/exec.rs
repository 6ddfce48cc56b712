//! Execution mode for the data-parallel loops.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How independent work items are evaluated.
///
/// `Parallel` uses rayon when the crate is built with the `parallel`
/// feature and degrades to `Sequential` otherwise. Both modes produce
/// results in input order, so reports are identical either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
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
    /// True when this mode actually runs on a thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    pub fn map_range<U, F>(self, range: Range<u64>, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(u64) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => range.into_par_iter().map(f).collect(),
            _ => range.map(f).collect(),
        }
    }

    /// Sums `f(i)` over `range`, split into fixed-size chunks.
    pub fn sum_range<F>(self, range: Range<u64>, chunk: u64, f: F) -> u64
    where
        F: Fn(u64) -> u64 + Sync + Send,
    {
        let chunk = chunk.max(1);
        let start = range.start;
        let len = range.end.saturating_sub(range.start);
        let chunks = len.div_ceil(chunk);
        self.map_range(0..chunks, |c| {
            let lo = start + c * chunk;
            let hi = (lo + chunk).min(range.end);
            (lo..hi).map(&f).sum::<u64>()
        })
        .into_iter()
        .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_preserve_order() {
        let items: Vec<u32> = (0..1000).collect();
        let seq = Exec::Sequential.map(&items, |x| x * 3);
        let par = Exec::Parallel.map(&items, |x| x * 3);
        assert_eq!(seq, par);
        assert_eq!(seq[999], 2997);
    }

    #[test]
    fn chunked_sum_covers_ragged_tail() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(exec.sum_range(0..1001, 64, |i| i), 1000 * 1001 / 2);
            assert_eq!(exec.sum_range(5..5, 64, |i| i), 0);
        }
    }
}
