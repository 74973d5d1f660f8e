//! Execution mode for the data-parallel scans.
//!
//! With the `rayon` feature (on by default) [`Exec::Parallel`] spreads work
//! over the rayon pool; without it every mode runs sequentially. Results never
//! depend on the mode: parallel paths use order-preserving collects and
//! `find_first`.

#[cfg(feature = "rayon")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "rayon") && self == Exec::Parallel
    }
}

/// Maps `f` over `items`, keeping input order.
pub fn map_collect<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "rayon")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Maps `f` over `lo..=hi`, keeping order.
pub fn map_range<R, F>(exec: Exec, lo: u64, hi: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "rayon")]
    if exec.is_parallel() {
        return (lo..=hi).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (lo..=hi).map(f).collect()
}

/// First `Some` of `f` over `lo..=hi` in index order.
pub fn find_first_range<R, F>(exec: Exec, lo: u64, hi: u64, f: F) -> Option<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "rayon")]
    if exec.is_parallel() {
        return (lo..=hi).into_par_iter().find_map_first(f);
    }
    let _ = exec;
    (lo..=hi).find_map(f)
}

/// First `Some` of `f` over `items` in slice order.
pub fn find_first<T, R, F>(exec: Exec, items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "rayon")]
    if exec.is_parallel() {
        return items.par_iter().find_map_first(f);
    }
    let _ = exec;
    items.iter().find_map(f)
}

pub fn sort_by_key<T, K, F>(exec: Exec, items: &mut [T], key: F)
where
    T: Send,
    K: Ord,
    F: Fn(&T) -> K + Sync,
{
    #[cfg(feature = "rayon")]
    if exec.is_parallel() {
        items.par_sort_by(|a, b| key(a).cmp(&key(b)));
        return;
    }
    let _ = exec;
    items.sort_by_key(key);
}

/// Stable sort; both modes give the same order for a consistent comparator.
pub fn sort_by<T, F>(exec: Exec, items: &mut [T], cmp: F)
where
    T: Send,
    F: Fn(&T, &T) -> std::cmp::Ordering + Sync,
{
    #[cfg(feature = "rayon")]
    if exec.is_parallel() {
        items.par_sort_by(cmp);
        return;
    }
    let _ = exec;
    items.sort_by(cmp);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map_collect(Exec::Sequential, &xs, |x| x * x);
        let b = map_collect(Exec::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        let f = |q: u64| (q.is_multiple_of(97) && q > 100).then_some(q);
        assert_eq!(
            find_first_range(Exec::Sequential, 1, 10_000, f),
            find_first_range(Exec::Parallel, 1, 10_000, f)
        );
        assert_eq!(find_first_range(Exec::Parallel, 1, 10_000, f), Some(194));
    }
}
