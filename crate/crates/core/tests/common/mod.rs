#![allow(dead_code)]

use extcount::{HostGraph, PatternGraph, RootTuple, RootedGraph};
use itertools::Itertools;
use proptest::prelude::*;

/// Ordered extensions of `x` by trying every injective map of the non-root
/// vertices.
pub fn naive_ordered(host: &HostGraph, rg: &RootedGraph, x: &RootTuple) -> u64 {
    let (v_g, v_h) = (rg.v_g(), rg.v_h());
    let free: Vec<usize> = (0..host.n())
        .filter(|v| !x.vertices().contains(&(*v as u32)))
        .collect();
    let edges = rg.extension_edges();
    let mut total = 0;
    for images in free.iter().copied().permutations(v_h - v_g) {
        let at = |v: usize| {
            if v < v_g {
                x.vertices()[v] as usize
            } else {
                images[v - v_g]
            }
        };
        if edges.iter().all(|&(a, b)| host.has_edge(at(a), at(b))) {
            total += 1;
        }
    }
    total
}

/// Permutations of the non-roots preserving adjacency.
pub fn naive_aut(rg: &RootedGraph) -> u64 {
    let (v_g, v_h) = (rg.v_g(), rg.v_h());
    let g = rg.pattern();
    (v_g..v_h)
        .permutations(v_h - v_g)
        .filter(|perm| {
            let at = |v: usize| if v < v_g { v } else { perm[v - v_g] };
            g.edges().iter().all(|&(a, b)| g.has_edge(at(a), at(b)))
        })
        .count() as u64
}

/// Rooted graphs on at most `max_v` vertices with at least one extension edge.
pub fn rooted_graph(max_v: usize) -> impl Strategy<Value = RootedGraph> {
    (2..=max_v)
        .prop_flat_map(|v_h| (Just(v_h), 1..v_h, any::<u64>()))
        .prop_filter_map("needs an extension edge", |(v_h, v_g, mask)| {
            let edges: Vec<(usize, usize)> = (0..v_h)
                .tuple_combinations()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| e)
                .collect();
            RootedGraph::new(PatternGraph::new(v_h, &edges).ok()?, v_g).ok()
        })
}

/// A host on `n` vertices from the low bits of `mask`.
pub fn host(n: usize, mask: u64) -> HostGraph {
    let pairs = n * (n - 1) / 2;
    let mask = if pairs >= 64 { mask } else { mask & ((1u64 << pairs) - 1) };
    HostGraph::from_pair_mask(n, mask)
}

/// `k` distinct host vertices chosen by `seed`.
pub fn root_tuple(n: usize, k: usize, seed: u64) -> RootTuple {
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut s = seed;
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        out.push(pool.remove((s >> 33) as usize % pool.len()));
    }
    RootTuple::new(out)
}
