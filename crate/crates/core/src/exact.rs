//! Exhaustive exact laws over all hosts on `n <= 8` vertices.
//!
//! Every one of the `2^C(n,2)` hosts is recounted from scratch. Hosts are
//! tallied as integers per `(edge count, value)` and only weighted by
//! `p^e (1-p)^(C(n,2)-e)` at the end, so the parallel split never touches
//! rational arithmetic and the result is independent of scheduling.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::classify::ratio_string;
use crate::count::{EngineError, ExtensionCounter, DEFAULT_LIST_CAP};
use crate::graph::{RootTuple, RootedGraph};
use crate::host::HostGraph;
use crate::par::{fold_merge, Execution};
use crate::stats::{deviation_bounds, mu_exact, r_star, rational_pow, StatsError};

/// Largest host size the oracle accepts (`2^28` hosts).
pub const MAX_EXACT_N: usize = 8;

const CHUNK: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("exact enumeration needs n <= {MAX_EXACT_N}, got {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// A quantity whose law over `G(n,p)` is wanted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactTarget {
    /// `X_x` at one root tuple.
    RootCount(RootTuple),
    /// `max_x X_x`.
    MaxCount,
    /// `min_x X_x`.
    MinCount,
    /// Indicator of `E_x`: exactly `r` extensions of `x`, pairwise disjoint
    /// outside the roots.
    ExEvent { root: RootTuple, r: u64 },
    /// Indicator that every root satisfies `|X_x - mu| < eps mu`.
    Concentration(BigRational),
    /// Indicator of `max_x X_x >= (1 + eps) mu`.
    UpperTail(BigRational),
    /// Indicator of `min_x X_x <= (1 - eps) mu`.
    LowerTail(BigRational),
}

impl ExactTarget {
    fn needs_all_roots(&self) -> bool {
        !matches!(self, ExactTarget::RootCount(_) | ExactTarget::ExEvent { .. })
    }

    /// The `E_x` target with `r = r*(mu, eps)` at the first root tuple.
    pub fn ex_event_for(rg: &RootedGraph, n: u64, p: &BigRational, eps: &BigRational) -> Result<Self, StatsError> {
        let mu = mu_exact(rg, n, p)?;
        Ok(ExactTarget::ExEvent {
            root: RootTuple::first(rg.v_g()),
            r: r_star(&mu, eps),
        })
    }
}

/// An exact distribution on nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactLaw {
    pub support: BTreeMap<u64, BigRational>,
}

impl ExactLaw {
    pub fn total(&self) -> BigRational {
        self.support.values().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn prob(&self, k: u64) -> BigRational {
        self.support.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `P(value <= k)`.
    pub fn cdf(&self, k: u64) -> BigRational {
        self.support
            .range(..=k)
            .fold(BigRational::zero(), |a, (_, q)| a + q)
    }

    pub fn mean(&self) -> BigRational {
        self.support
            .iter()
            .fold(BigRational::zero(), |a, (&k, q)| a + q * BigInt::from(k))
    }

    pub fn variance(&self) -> BigRational {
        let mean = self.mean();
        let second = self
            .support
            .iter()
            .fold(BigRational::zero(), |a, (&k, q)| a + q * BigInt::from(k) * BigInt::from(k));
        second - &mean * &mean
    }

    /// Rows `(value, "num/den")` in increasing value order.
    pub fn rows(&self) -> Vec<(u64, String)> {
        self.support.iter().map(|(&k, q)| (k, ratio_string(q))).collect()
    }
}

impl Serialize for ExactLaw {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row {
            value: u64,
            probability: String,
        }
        let rows: Vec<Row> = self
            .rows()
            .into_iter()
            .map(|(value, probability)| Row { value, probability })
            .collect();
        rows.serialize(s)
    }
}

type Tally = Vec<BTreeMap<(u32, u64), u64>>;

/// Laws of every target, from one pass over all hosts on `n` vertices.
pub fn exact_laws(
    rg: &RootedGraph,
    n: usize,
    p: &BigRational,
    targets: &[ExactTarget],
    exec: Execution,
) -> Result<Vec<ExactLaw>, ExactError> {
    if n > MAX_EXACT_N {
        return Err(ExactError::TooLarge(n));
    }
    if p.is_negative() || *p > BigRational::one() {
        return Err(StatsError::BadProbability(p.to_string()).into());
    }
    let mu = mu_exact(rg, n as u64, p)?;
    for t in targets {
        if let ExactTarget::RootCount(x) | ExactTarget::ExEvent { root: x, .. } = t {
            x.validate(n, rg.v_g()).map_err(EngineError::BadRootTuple)?;
        }
    }
    let bounds: Vec<(i64, i64)> = targets
        .iter()
        .map(|t| match t {
            ExactTarget::Concentration(eps) | ExactTarget::UpperTail(eps) | ExactTarget::LowerTail(eps) => {
                deviation_bounds(&mu, eps)
            }
            _ => (0, 0),
        })
        .collect();

    let counter = ExtensionCounter::new(rg);
    let pairs = n * (n - 1) / 2;
    let hosts = 1u64 << pairs;
    let chunks: Vec<u64> = (0..hosts.div_ceil(CHUNK)).collect();
    let need_all = targets.iter().any(ExactTarget::needs_all_roots);

    let eval = |host: &HostGraph| -> Result<Vec<u64>, EngineError> {
        let all = if need_all {
            Some(counter.all_roots(host, Execution::Sequential)?)
        } else {
            None
        };
        targets
            .iter()
            .enumerate()
            .map(|(i, t)| {
                Ok(match t {
                    ExactTarget::RootCount(x) => counter.unordered(host, x)?,
                    ExactTarget::MaxCount => all.as_ref().expect("all roots").max_count,
                    ExactTarget::MinCount => all.as_ref().expect("all roots").min_count,
                    ExactTarget::ExEvent { root, r } => counter.disjoint_event(host, root, *r, DEFAULT_LIST_CAP)? as u64,
                    ExactTarget::Concentration(_) => {
                        let s = all.as_ref().expect("all roots");
                        let (lo, hi) = bounds[i];
                        (lo <= hi && s.min_count as i64 >= lo && s.max_count as i64 <= hi) as u64
                    }
                    ExactTarget::UpperTail(_) => (all.as_ref().expect("all roots").max_count as i64 > bounds[i].1) as u64,
                    ExactTarget::LowerTail(_) => ((all.as_ref().expect("all roots").min_count as i64) < bounds[i].0) as u64,
                })
            })
            .collect()
    };

    let tally: Result<Tally, EngineError> = fold_merge(
        exec,
        chunks,
        || Ok(vec![BTreeMap::new(); targets.len()]),
        |acc: Result<Tally, EngineError>, chunk| {
            let mut acc = acc?;
            for mask in chunk * CHUNK..((chunk + 1) * CHUNK).min(hosts) {
                let host = HostGraph::from_pair_mask(n, mask);
                let e = mask.count_ones();
                for (slot, value) in acc.iter_mut().zip(eval(&host)?) {
                    *slot.entry((e, value)).or_insert(0) += 1;
                }
            }
            Ok(acc)
        },
        |a, b| {
            let (mut a, b) = (a?, b?);
            for (x, y) in a.iter_mut().zip(b) {
                for (k, c) in y {
                    *x.entry(k).or_insert(0) += c;
                }
            }
            Ok(a)
        },
    );
    let tally = tally?;

    let q = BigRational::one() - p;
    let weights: Vec<BigRational> = (0..=pairs)
        .map(|e| rational_pow(p, e) * rational_pow(&q, pairs - e))
        .collect();
    Ok(tally
        .into_iter()
        .map(|slot| {
            let mut support: BTreeMap<u64, BigRational> = BTreeMap::new();
            for ((e, value), count) in slot {
                let w = &weights[e as usize] * BigInt::from(count);
                if w.is_zero() {
                    continue;
                }
                *support.entry(value).or_insert_with(BigRational::zero) += w;
            }
            ExactLaw { support }
        })
        .collect())
}

pub fn exact_distribution(rg: &RootedGraph, n: usize, p: &BigRational, target: ExactTarget) -> Result<ExactLaw, ExactError> {
    Ok(exact_laws(rg, n, p, &[target], Execution::default())?.remove(0))
}
