//! Sequential / data-parallel execution switch.
//!
//! Without the `parallel` feature every `Execution::Parallel` request runs
//! sequentially. Results never depend on the choice: all reductions are
//! integer sums or ordered collections.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `items` and returns results in input order.
pub fn map_ordered<T, R, F>(exec: Execution, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().map(f).collect();
    }
    let _ = exec;
    items.into_iter().map(f).collect()
}

/// Folds `items` into per-worker accumulators and merges them. `merge` must
/// be associative and commutative (integer tallies).
pub fn fold_merge<T, A, Id, F, M>(exec: Execution, items: Vec<T>, identity: Id, fold: F, merge: M) -> A
where
    T: Send,
    A: Send,
    Id: Fn() -> A + Sync + Send,
    F: Fn(A, T) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items
            .into_par_iter()
            .fold(&identity, &fold)
            .reduce(&identity, &merge);
    }
    let _ = (exec, &merge);
    items.into_iter().fold(identity(), fold)
}
