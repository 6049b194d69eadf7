//! Data-parallel fan-out for embarrassingly parallel experiment cells.
//!
//! With the `parallel` feature each cell runs on the rayon pool; without it
//! everything is a plain sequential loop. Results always come back in index
//! order, so downstream report assembly is deterministic either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..len`, in parallel when the `parallel` feature is on.
pub fn map_indexed<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    run_indexed(len, false, f)
}

/// Sequential counterpart of [`map_indexed`], available regardless of
/// features. Benchmarks use it to compare against the parallel path.
pub fn map_indexed_seq<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    run_indexed(len, true, f)
}

pub(crate) fn run_indexed<U, F>(len: usize, sequential: bool, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !sequential {
        return (0..len).into_par_iter().map(&f).collect();
    }
    let _ = sequential;
    (0..len).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let a = map_indexed(257, |i| i * i);
        let b = map_indexed_seq(257, |i| i * i);
        assert_eq!(a, b);
    }
}
