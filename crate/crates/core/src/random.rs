//! Seeded `G(n,p)` sampling.
//!
//! Generator: ChaCha8 seeded through `seed_from_u64`. Trial `t` of cell `c`
//! under base seed `s` uses `mix(mix(s, c), t)` with
//! `mix(a, b) = splitmix64(a ^ splitmix64(b))`, so every trial is
//! reproducible on its own regardless of how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::host::HostGraph;

/// Above this edge probability pairs are drawn one by one; at or below it
/// the sampler skips geometrically between present edges.
pub const DENSE_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn mix(a: u64, b: u64) -> u64 {
    splitmix64(a ^ splitmix64(b))
}

pub fn trial_seed(base: u64, cell: u64, trial: u64) -> u64 {
    mix(mix(base, cell), trial)
}

/// Samples `G(n,p)`. Panics if `p` is outside `[0,1]` or `n < 2`.
pub fn sample_gnp(cfg: SamplerConfig) -> HostGraph {
    let SamplerConfig { n, p, seed } = cfg;
    assert!(n >= 2, "n must be at least 2");
    assert!((0.0..=1.0).contains(&p), "p must lie in [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    // pairs are visited in lexicographic order, which keeps every
    // adjacency list sorted
    let mut add = |i: usize, j: usize| {
        adj[i].push(j as u32);
        adj[j].push(i as u32);
    };
    if p > DENSE_THRESHOLD {
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < p {
                    add(i, j);
                }
            }
        }
    } else if p > 0.0 {
        let ln_q = (-p).ln_1p();
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            // U in (0, 1]
            let u = 1.0 - rng.random::<f64>();
            let skip = (u.ln() / ln_q).floor();
            if !skip.is_finite() || skip >= (n * n) as f64 {
                break;
            }
            j += skip as usize + 1;
            while i < n && j >= n {
                j = j - n + i + 2;
                i += 1;
            }
            if i + 1 >= n {
                break;
            }
            add(i, j);
        }
    }
    HostGraph::from_sorted_adjacency(n, adj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let cfg = |p| SamplerConfig { n: 30, p, seed: 7 };
        assert_eq!(sample_gnp(cfg(0.0)).edge_count(), 0);
        assert_eq!(sample_gnp(cfg(1.0)).edge_count(), 435);
        assert_eq!(sample_gnp(cfg(1e-300)).edge_count(), 0);
    }

    #[test]
    fn determinism() {
        for p in [0.05, 0.5] {
            let cfg = SamplerConfig { n: 200, p, seed: 99 };
            assert_eq!(sample_gnp(cfg).to_text(), sample_gnp(cfg).to_text());
            let other = SamplerConfig { seed: 100, ..cfg };
            assert_ne!(sample_gnp(cfg).to_text(), sample_gnp(other).to_text());
        }
        assert_ne!(trial_seed(1, 0, 0), trial_seed(1, 0, 1));
        assert_ne!(trial_seed(1, 0, 1), trial_seed(1, 1, 0));
    }

    #[test]
    fn sparse_edge_count_within_five_sigma() {
        let g = sample_gnp(SamplerConfig {
            n: 10_000,
            p: 1e-3,
            seed: 2024,
        });
        let pairs: f64 = 10_000.0 * 9_999.0 / 2.0;
        let mean = 1e-3 * pairs;
        let sd = (pairs * 1e-3 * (1.0 - 1e-3)).sqrt();
        assert!((g.edge_count() as f64 - mean).abs() < 5.0 * sd, "{}", g.edge_count());
    }

    #[test]
    fn both_regimes_have_uniform_pairs() {
        // every pair, including the last one, is reachable in both regimes
        for p in [0.08, 0.3] {
            let mut hits = vec![0u32; 6 * 5 / 2];
            for seed in 0..4000 {
                let g = sample_gnp(SamplerConfig { n: 6, p, seed });
                let mut idx = 0;
                for a in 0..6 {
                    for b in a + 1..6 {
                        hits[idx] += g.has_edge(a, b) as u32;
                        idx += 1;
                    }
                }
            }
            let mean = 4000.0 * p;
            let sd = (4000.0_f64 * p * (1.0 - p)).sqrt();
            for h in hits {
                assert!((h as f64 - mean).abs() < 5.0 * sd, "p={p}: {h}");
            }
        }
    }
}
