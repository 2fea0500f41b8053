mod common;

use extcount::graph::automorphism_count;
use extcount::random::{sample_gnp, trial_seed, SamplerConfig};
use extcount::{Execution, ExtensionCounter, HostGraph, RootTuple};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ordered_count_matches_naive(rg in common::rooted_graph(5), n in 5usize..=8, mask: u64, seed: u64) {
        prop_assume!(n >= rg.v_h());
        let host = common::host(n, mask);
        let x = common::root_tuple(n, rg.v_g(), seed);
        let counter = ExtensionCounter::new(&rg);
        let y = counter.ordered(&host, &x).unwrap();
        prop_assert_eq!(y, common::naive_ordered(&host, &rg, &x));
        prop_assert_eq!(y % automorphism_count(&rg), 0);
        prop_assert_eq!(counter.unordered(&host, &x).unwrap() * counter.aut(), y);
    }

    #[test]
    fn adding_edges_never_loses_extensions(rg in common::rooted_graph(5), mask: u64, seed: u64, order in proptest::collection::vec((0usize..7, 0usize..7), 1..12)) {
        let n = 7;
        prop_assume!(n >= rg.v_h());
        let mut host = common::host(n, mask & 0x3ff);
        let x = common::root_tuple(n, rg.v_g(), seed);
        let counter = ExtensionCounter::new(&rg);
        let mut last = counter.ordered(&host, &x).unwrap();
        for (a, b) in order {
            if a == b {
                continue;
            }
            host = host.with_edge(a, b);
            let now = counter.ordered(&host, &x).unwrap();
            prop_assert!(now >= last);
            last = now;
        }
    }

    #[test]
    fn all_roots_agrees_with_single_roots(rg in common::rooted_graph(4), n in 4usize..=7, mask: u64) {
        prop_assume!(n >= rg.v_h());
        let host = common::host(n, mask);
        let counter = ExtensionCounter::new(&rg);
        let stats = counter.all_roots(&host, Execution::Sequential).unwrap();
        prop_assert_eq!(&stats, &counter.all_roots(&host, Execution::Parallel).unwrap());
        for (x, value) in stats.iter() {
            prop_assert_eq!(value, counter.unordered(&host, &x).unwrap());
        }
    }

    #[test]
    fn relabelling_the_host_permutes_counts(rg in common::rooted_graph(4), mask: u64, seed: u64) {
        let n = 7;
        prop_assume!(n >= rg.v_h());
        let host = common::host(n, mask);
        let perm: Vec<usize> = common::root_tuple(n, n, seed).vertices().iter().map(|&v| v as usize).collect();
        let moved = host.relabeled(&perm);
        let x = common::root_tuple(n, rg.v_g(), seed ^ 1);
        let mx = RootTuple::new(x.vertices().iter().map(|&v| perm[v as usize] as u32).collect());
        let counter = ExtensionCounter::new(&rg);
        prop_assert_eq!(counter.ordered(&host, &x).unwrap(), counter.ordered(&moved, &mx).unwrap());
    }
}

#[test]
fn sampler_is_deterministic_across_regimes() {
    for p in [0.003, 0.05, 0.1, 0.3] {
        let cfg = SamplerConfig { n: 300, p, seed: trial_seed(9, 2, 5) };
        assert_eq!(sample_gnp(cfg), sample_gnp(cfg));
        let other = SamplerConfig { seed: trial_seed(9, 2, 6), ..cfg };
        assert_ne!(sample_gnp(cfg), sample_gnp(other));
    }
}

#[test]
fn counts_in_complete_hosts_are_falling_factorials() {
    let rg = extcount::builtin_fixture("fig2e").unwrap();
    let counter = ExtensionCounter::new(&rg);
    let host = HostGraph::complete(9);
    // 8 * 7 * 6 * 5 ordered placements of the four non-roots.
    assert_eq!(counter.ordered(&host, &RootTuple::first(1)).unwrap(), 1680);
}
