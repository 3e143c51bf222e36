// SPDX-License-Identifier: Apache-2.0

//! Execution policy for the data-parallel kernels.
//!
//! With the `parallel` feature (default) the kernels fan out over rayon;
//! without it, [`Exec::Parallel`] quietly runs the sequential path. Every
//! kernel returns the same value under both policies.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this policy actually runs on the rayon pool in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Maps `f` over `0..len` and collects in index order.
pub fn map_range<T, F>(exec: Exec, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// First `Some` in index order. Deterministic regardless of scheduling.
pub fn find_map_first<T, F>(exec: Exec, len: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().find_map_first(f);
    }
    let _ = exec;
    (0..len).find_map(f)
}

/// Minimum of the `Some` results of `f` over `0..len`.
pub fn min_over<T, F>(exec: Exec, len: usize, f: F) -> Option<T>
where
    T: Send + Ord,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().filter_map(f).min();
    }
    let _ = exec;
    (0..len).filter_map(f).min()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(map_range(exec, 5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(
                find_map_first(exec, 100, |i| (i % 7 == 6).then_some(i)),
                Some(6)
            );
            assert_eq!(
                min_over(exec, 100, |i| (i > 40).then_some(100 - i)),
                Some(1)
            );
        }
    }
}
