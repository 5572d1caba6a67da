//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the helpers dispatch onto rayon's
//! global pool when asked for [`ExecMode::Parallel`]. Without the feature
//! every mode runs on the calling thread. Results never depend on the mode:
//! work is split into independent items and combined in a fixed order.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// Whether this build can actually run work concurrently.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// `(0..n).map(f)` collected in index order.
pub fn map_range<T, F>(n: usize, mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

/// `items.iter().map(f)` collected in order.
pub fn map_slice<S, T, F>(items: &[S], mode: ExecMode, f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    map_range(items.len(), mode, |i| f(&items[i]))
}

/// Fallible variant of [`map_range`]; the first error by index wins.
pub fn try_map_range<T, E, F>(n: usize, mode: ExecMode, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map_range(n, mode, f).into_iter().collect()
}

/// Ordered reduction of a sequence with an associative but non-commutative
/// operation. The combination tree is a fixed balanced pairing, so the
/// floating-point result is identical in every mode.
///
/// `combine(earlier, later)` must return the product for the concatenated
/// range.
pub fn ordered_tree_reduce<T, F>(mut items: Vec<T>, mode: ExecMode, combine: F) -> Option<T>
where
    T: Send + Sync,
    F: Fn(&T, &T) -> T + Sync + Send,
{
    while items.len() > 1 {
        let pairs = items.len() / 2;
        let mut next = map_range(pairs, mode, |k| combine(&items[2 * k], &items[2 * k + 1]));
        if items.len() % 2 == 1 {
            next.push(items.pop().unwrap());
        }
        items = next;
    }
    items.pop()
}
