//! Sequential or data-parallel evaluation with identical, order-preserving results.
//!
//! Without the `parallel` feature every mode runs sequentially.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// `f` applied to `0..n`, results in index order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.map_range(items.len(), |i| f(&items[i]))
    }

    pub fn filter_map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync + Send,
    {
        self.map(items, f).into_iter().flatten().collect()
    }

    /// First `Some` in index order over `0..n`; the parallel mode may evaluate
    /// later indices speculatively but returns the same value.
    pub fn find_map_first<R, F>(self, n: usize, f: F) -> Option<R>
    where
        R: Send,
        F: Fn(usize) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().find_map_first(f);
        }
        (0..n).find_map(f)
    }

    pub fn all<F>(self, n: usize, f: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        self.find_map_first(n, |i| (!f(i)).then_some(())).is_none()
    }
}

/// Decodes `index` into a tuple of `dims` coordinates in `[-bound, bound]`,
/// last coordinate varying fastest.
pub fn box_point(index: usize, dims: usize, bound: i64) -> Vec<i64> {
    let side = (2 * bound + 1) as usize;
    let mut out = vec![0; dims];
    let mut k = index;
    for slot in out.iter_mut().rev() {
        *slot = (k % side) as i64 - bound;
        k /= side;
    }
    out
}

pub fn box_size(dims: usize, bound: i64) -> usize {
    ((2 * bound + 1) as usize).pow(dims as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let seq = Execution::Sequential.map_range(100, |i| i * i);
        let par = Execution::Parallel.map_range(100, |i| i * i);
        assert_eq!(seq, par);
        let f = |i: usize| (i > 10 && i % 7 == 0).then_some(i);
        assert_eq!(Execution::Parallel.find_map_first(1000, f), Some(14));
        assert_eq!(Execution::Sequential.find_map_first(1000, f), Some(14));
    }

    #[test]
    fn box_points_are_lexicographic() {
        assert_eq!(box_point(0, 2, 1), vec![-1, -1]);
        assert_eq!(box_point(1, 2, 1), vec![-1, 0]);
        assert_eq!(box_point(8, 2, 1), vec![1, 1]);
        assert_eq!(box_size(4, 2), 625);
    }
}
