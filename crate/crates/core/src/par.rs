//! Per-ray data parallelism.
//!
//! With the `parallel` feature the [`Execution::Parallel`] policy maps over
//! rayon's thread pool; without it every policy runs sequentially. Maps are
//! index-preserving and each element is computed independently, so both
//! policies produce bit-identical output. Reductions are never done here;
//! callers sum in ray order.

/// Execution policy for per-ray loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this policy actually fans out in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Below this many elements the parallel path is not worth the fork/join.
const MIN_PARALLEL_LEN: usize = 64;

#[cfg(feature = "parallel")]
pub fn map_indexed<U, F>(exec: Execution, len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    if exec.is_parallel() && len >= MIN_PARALLEL_LEN {
        (0..len).into_par_iter().map(f).collect()
    } else {
        (0..len).map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U, F>(_exec: Execution, len: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    let _ = MIN_PARALLEL_LEN;
    (0..len).map(f).collect()
}

/// Map over independent jobs (scenario batches, convergence sweeps).
#[cfg(feature = "parallel")]
pub fn map_jobs<T, U, F>(exec: Execution, jobs: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    if exec.is_parallel() {
        jobs.par_iter().map(f).collect()
    } else {
        jobs.iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_jobs<T, U, F>(_exec: Execution, jobs: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    jobs.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let f = |i: usize| (i as f64).sqrt().sin();
        let a = map_indexed(Execution::Sequential, 1000, f);
        let b = map_indexed(Execution::Parallel, 1000, f);
        assert_eq!(a, b);
    }

    #[test]
    fn jobs_keep_order() {
        let jobs: Vec<u32> = (0..100).collect();
        let out = map_jobs(Execution::Parallel, &jobs, |j| j * 2);
        assert_eq!(out, (0..100).map(|j| j * 2).collect::<Vec<_>>());
    }
}
