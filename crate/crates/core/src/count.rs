//! Backtracking extension counting in concrete host graphs.
//!
//! Pattern vertices are placed in a fixed greedy order (most edges to
//! already placed vertices, then higher degree in `H`, then lower label).
//! Candidates for the next vertex are the common host neighbours of the
//! images of its placed pattern neighbours, computed with bitset rows for
//! hosts up to [`BITSET_LIMIT`](crate::host::BITSET_LIMIT) vertices and with
//! sorted adjacency lists above that.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{
    extension_neighbors, root_fixing_automorphisms, PatternGraph, RootTuple, RootedGraph, VertexSet,
    MAX_PATTERN_VERTICES,
};
use crate::host::HostGraph;
use crate::par::{fold_merge, Execution};

/// Default cap on listed extensions.
pub const DEFAULT_LIST_CAP: usize = 1_000_000;

/// Largest dense per-root tally (`n^v_G` slots).
pub const MAX_DENSE_TALLY: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid root tuple: {0}")]
    BadRootTuple(String),
    #[error("host has {n} vertices but the pattern needs {v_h}")]
    HostTooSmall { n: usize, v_h: usize },
    #[error("ordered count {ordered} is not divisible by aut = {aut} (engine invariant violated)")]
    NotDivisible { ordered: u64, aut: u64 },
    #[error("more than {cap} extensions")]
    CapExceeded { cap: usize },
    #[error("{n}^{v_g} root tuples exceed the dense tally limit")]
    TooManyRootTuples { n: usize, v_g: usize },
}

#[derive(Debug, Clone)]
struct Step {
    vertex: usize,
    anchors: Vec<usize>,
    /// An earlier step whose (nonempty) anchors are a subset of these; its
    /// live candidate list is a superset of this step's candidates.
    base: Option<usize>,
}

/// A placement order for the vertices of a pattern not in `placed`.
#[derive(Debug, Clone)]
pub(crate) struct Plan {
    steps: Vec<Step>,
}

impl Plan {
    pub(crate) fn new(pattern: &PatternGraph, root_count: usize, placed: VertexSet) -> Self {
        let mut placed = placed;
        let mut remaining = pattern.vertices().difference(placed);
        let mut steps: Vec<Step> = Vec::with_capacity(remaining.len());
        while !remaining.is_empty() {
            let vertex = remaining
                .iter()
                .max_by_key(|&v| {
                    let back = extension_neighbors(pattern, root_count, v).0 & placed.0;
                    (back.count_ones(), pattern.degree(v), Reverse(v))
                })
                .expect("non-empty");
            let anchor_set = VertexSet(extension_neighbors(pattern, root_count, vertex).0 & placed.0);
            let base = steps
                .iter()
                .enumerate()
                .filter(|(_, t)| !t.anchors.is_empty() && t.anchors.iter().all(|&a| anchor_set.contains(a)))
                .max_by_key(|(i, t)| (t.anchors.len(), *i))
                .map(|(i, _)| i);
            steps.push(Step {
                vertex,
                anchors: anchor_set.iter().collect(),
                base,
            });
            placed = placed.union(VertexSet::from_vertices([vertex]));
            remaining = remaining.difference(VertexSet::from_vertices([vertex]));
        }
        Plan { steps }
    }

    #[cfg(test)]
    fn order(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.vertex).collect()
    }
}

/// Receives completed embeddings.
pub(crate) trait Leaf {
    /// Whether leaves placing `vertex` last must be reported one by one.
    fn wants_each(&self, vertex: usize) -> bool;
    /// `count` embeddings share `image` on every vertex but the last.
    fn batch(&mut self, image: &[u32], count: u64);
    fn each(&mut self, image: &[u32]);
    fn stopped(&self) -> bool {
        false
    }
}

struct Matcher<'a> {
    host: &'a HostGraph,
    plan: &'a Plan,
    image: [u32; MAX_PATTERN_VERTICES],
    used: Vec<u32>,
    bits: Vec<Vec<u64>>,
    lists: Vec<Vec<u32>>,
    // List mode only: `marks[a]` is the neighbourhood of `marked[a]` as a
    // bitset, filled lazily the first time an anchor image is probed.
    marks: Vec<Vec<u64>>,
    marked: [u32; MAX_PATTERN_VERTICES],
}

impl<'a> Matcher<'a> {
    fn new(host: &'a HostGraph, plan: &'a Plan) -> Self {
        let depth = plan.steps.len();
        let mut marks = vec![Vec::new(); MAX_PATTERN_VERTICES];
        if !host.has_bitsets() {
            for step in &plan.steps {
                for &a in &step.anchors {
                    if marks[a].is_empty() {
                        marks[a] = vec![0; host.n().div_ceil(64)];
                    }
                }
            }
        }
        Matcher {
            host,
            plan,
            image: [u32::MAX; MAX_PATTERN_VERTICES],
            used: Vec::with_capacity(MAX_PATTERN_VERTICES),
            bits: vec![vec![0; host.words()]; depth],
            lists: vec![Vec::new(); depth],
            marks,
            marked: [u32::MAX; MAX_PATTERN_VERTICES],
        }
    }

    fn mark(&mut self, vertex: usize) {
        let image = self.image[vertex];
        if self.marked[vertex] == image {
            return;
        }
        let old = std::mem::replace(&mut self.marked[vertex], image);
        let marks = &mut self.marks[vertex];
        if old != u32::MAX {
            for &w in self.host.neighbors(old as usize) {
                marks[w as usize / 64] = 0;
            }
        }
        for &w in self.host.neighbors(image as usize) {
            marks[w as usize / 64] |= 1 << (w % 64);
        }
    }

    fn pin(&mut self, vertex: usize, host_vertex: u32) {
        self.image[vertex] = host_vertex;
        self.used.push(host_vertex);
    }

    fn candidates_bits(&mut self, depth: usize) -> Vec<u64> {
        let mut buf = std::mem::take(&mut self.bits[depth]);
        let step = &self.plan.steps[depth];
        match step.anchors.split_first() {
            None => {
                buf.fill(u64::MAX);
                let tail = self.host.n() % 64;
                if tail != 0 {
                    *buf.last_mut().expect("n > 0") = (1u64 << tail) - 1;
                }
            }
            Some((&first, rest)) => {
                buf.copy_from_slice(self.host.row(self.image[first] as usize).expect("bitset host"));
                for &a in rest {
                    let row = self.host.row(self.image[a] as usize).expect("bitset host");
                    for (b, r) in buf.iter_mut().zip(row) {
                        *b &= r;
                    }
                }
            }
        }
        for &u in &self.used {
            buf[u as usize / 64] &= !(1u64 << (u % 64));
        }
        buf
    }

    /// Fills `self.lists[depth]`.
    fn candidates_list(&mut self, depth: usize) {
        let mut buf = std::mem::take(&mut self.lists[depth]);
        buf.clear();
        let plan = self.plan;
        let step = &plan.steps[depth];
        let host = self.host;
        if step.anchors.is_empty() {
            buf.extend((0..host.n() as u32).filter(|v| !self.used.contains(v)));
            self.lists[depth] = buf;
            return;
        }
        let pivot = *step
            .anchors
            .iter()
            .min_by_key(|&&a| host.degree(self.image[a] as usize))
            .expect("anchors");
        let pivot_len = host.degree(self.image[pivot] as usize);
        let base = step
            .base
            .filter(|&t| self.lists[t].len() < pivot_len);
        match base {
            Some(t) => {
                let covered = &plan.steps[t].anchors;
                let rest: Vec<usize> = step.anchors.iter().copied().filter(|a| !covered.contains(a)).collect();
                for &v in &self.lists[t] {
                    if self.used.contains(&v) {
                        continue;
                    }
                    if rest.iter().all(|&a| host.has_edge(self.image[a] as usize, v as usize)) {
                        buf.push(v);
                    }
                }
            }
            None => {
                for &a in &step.anchors {
                    if a != pivot {
                        self.mark(a);
                    }
                }
                for &v in host.neighbors(self.image[pivot] as usize) {
                    let ok = step
                        .anchors
                        .iter()
                        .filter(|&&a| a != pivot)
                        .all(|&a| self.marks[a][v as usize / 64] >> (v % 64) & 1 == 1);
                    if ok && !self.used.contains(&v) {
                        buf.push(v);
                    }
                }
            }
        }
        self.lists[depth] = buf;
    }

    /// Enumerates all completions from `depth` on; returns `false` once the
    /// leaf asks to stop.
    fn descend<L: Leaf>(&mut self, depth: usize, leaf: &mut L) -> bool {
        let vertex = self.plan.steps[depth].vertex;
        let last = depth + 1 == self.plan.steps.len();
        if self.host.has_bitsets() {
            let buf = self.candidates_bits(depth);
            let mut go_on = true;
            if last && !leaf.wants_each(vertex) {
                let count: u64 = buf.iter().map(|w| w.count_ones() as u64).sum();
                if count > 0 {
                    leaf.batch(&self.image, count);
                }
            } else {
                'outer: for (w, &word) in buf.iter().enumerate() {
                    let mut word = word;
                    while word != 0 {
                        let v = (w * 64 + word.trailing_zeros() as usize) as u32;
                        word &= word - 1;
                        if !self.visit(depth, vertex, v, last, leaf) {
                            go_on = false;
                            break 'outer;
                        }
                    }
                }
            }
            self.bits[depth] = buf;
            go_on
        } else {
            // Iterated by index: deeper steps may filter this list.
            self.candidates_list(depth);
            let len = self.lists[depth].len();
            if last && !leaf.wants_each(vertex) {
                if len > 0 {
                    leaf.batch(&self.image, len as u64);
                }
                return true;
            }
            for i in 0..len {
                let v = self.lists[depth][i];
                if !self.visit(depth, vertex, v, last, leaf) {
                    return false;
                }
            }
            true
        }
    }

    fn visit<L: Leaf>(&mut self, depth: usize, vertex: usize, v: u32, last: bool, leaf: &mut L) -> bool {
        self.image[vertex] = v;
        if last {
            leaf.each(&self.image);
            !leaf.stopped()
        } else {
            self.used.push(v);
            let go_on = self.descend(depth + 1, leaf);
            self.used.pop();
            go_on && !leaf.stopped()
        }
    }

    /// Candidates for the first step (images of already pinned vertices
    /// taken into account), in increasing order.
    fn first_candidates(&mut self) -> Vec<u32> {
        if self.host.has_bitsets() {
            let buf = self.candidates_bits(0);
            let mut out = Vec::new();
            for (w, &word) in buf.iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    out.push((w * 64 + word.trailing_zeros() as usize) as u32);
                    word &= word - 1;
                }
            }
            self.bits[0] = buf;
            out
        } else {
            self.candidates_list(0);
            self.lists[0].clone()
        }
    }
}

/// Runs a full enumeration, splitting on the image of the first placed
/// vertex. Each worker owns a leaf from `make`; leaves are merged with
/// `merge`.
fn enumerate_split<L, M, G>(host: &HostGraph, plan: &Plan, pinned: &[(usize, u32)], exec: Execution, make: M, merge: G) -> L
where
    L: Leaf + Send,
    M: Fn() -> L + Sync + Send,
    G: Fn(L, L) -> L + Sync + Send,
{
    if plan.steps.is_empty() {
        let mut leaf = make();
        let mut image = [u32::MAX; MAX_PATTERN_VERTICES];
        for &(v, x) in pinned {
            image[v] = x;
        }
        leaf.each(&image);
        return leaf;
    }
    let mut seed = Matcher::new(host, plan);
    for &(v, x) in pinned {
        seed.pin(v, x);
    }
    if plan.steps.len() == 1 {
        let mut leaf = make();
        seed.descend(0, &mut leaf);
        return leaf;
    }
    let first = plan.steps[0].vertex;
    let candidates = seed.first_candidates();
    let first_list = &seed.lists[0];
    fold_merge(
        exec,
        candidates,
        || (make(), None::<Matcher<'_>>),
        |(mut leaf, matcher), v| {
            let mut m = matcher.unwrap_or_else(|| {
                let mut m = Matcher::new(host, plan);
                for &(pv, x) in pinned {
                    m.pin(pv, x);
                }
                m.lists[0].clone_from(first_list);
                m
            });
            if !leaf.stopped() {
                m.pin(first, v);
                m.descend(1, &mut leaf);
                m.used.pop();
            }
            (leaf, Some(m))
        },
        |(a, _), (b, _)| (merge(a, b), None),
    )
    .0
}

struct CountLeaf {
    total: u64,
}

impl Leaf for CountLeaf {
    fn wants_each(&self, _vertex: usize) -> bool {
        false
    }
    fn batch(&mut self, _image: &[u32], count: u64) {
        self.total += count;
    }
    fn each(&mut self, _image: &[u32]) {
        self.total += 1;
    }
}

/// Per-root-tuple tally of ordered embeddings with roots `0..v_g`.
struct TallyLeaf {
    n: usize,
    v_g: usize,
    counts: Vec<u64>,
}

impl TallyLeaf {
    fn index(&self, image: &[u32]) -> usize {
        image[..self.v_g]
            .iter()
            .fold(0, |acc, &x| acc * self.n + x as usize)
    }
}

impl Leaf for TallyLeaf {
    fn wants_each(&self, vertex: usize) -> bool {
        vertex < self.v_g
    }
    fn batch(&mut self, image: &[u32], count: u64) {
        let i = self.index(image);
        self.counts[i] += count;
    }
    fn each(&mut self, image: &[u32]) {
        let i = self.index(image);
        self.counts[i] += 1;
    }
}

struct VertexLeaf {
    k: usize,
    z: Vec<u64>,
}

impl Leaf for VertexLeaf {
    fn wants_each(&self, _vertex: usize) -> bool {
        true
    }
    fn batch(&mut self, _image: &[u32], _count: u64) {
        unreachable!("vertex tallies need each leaf")
    }
    fn each(&mut self, image: &[u32]) {
        for &x in &image[..self.k] {
            self.z[x as usize] += 1;
        }
    }
}

type CopyKey = (Vec<u32>, Vec<(u32, u32)>);

struct ListLeaf<'a> {
    rg: &'a RootedGraph,
    edges: Vec<(usize, usize)>,
    copies: BTreeMap<CopyKey, u64>,
    ordered: u64,
    limit: u64,
}

impl Leaf for ListLeaf<'_> {
    fn wants_each(&self, _vertex: usize) -> bool {
        true
    }
    fn batch(&mut self, _image: &[u32], _count: u64) {
        unreachable!("listing needs each leaf")
    }
    fn each(&mut self, image: &[u32]) {
        self.ordered += 1;
        if self.ordered > self.limit {
            return;
        }
        let mut vertices: Vec<u32> = self.rg.non_roots().iter().map(|v| image[v]).collect();
        vertices.sort_unstable();
        let mut edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (image[a], image[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        *self.copies.entry((vertices, edges)).or_insert(0) += 1;
    }
    fn stopped(&self) -> bool {
        self.ordered > self.limit
    }
}

/// One unordered `(G,H)`-extension: its non-root host vertices and the host
/// edges it uses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Extension {
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
}

/// Rooted counter with a cached placement plan.
#[derive(Debug, Clone)]
pub struct ExtensionCounter {
    rg: RootedGraph,
    aut: u64,
    rooted_plan: Plan,
}

impl ExtensionCounter {
    pub fn new(rg: &RootedGraph) -> Self {
        ExtensionCounter {
            rg: rg.clone(),
            aut: crate::graph::automorphism_count(rg),
            rooted_plan: Plan::new(rg.pattern(), rg.v_g(), rg.roots()),
        }
    }

    pub fn rooted_graph(&self) -> &RootedGraph {
        &self.rg
    }

    pub fn aut(&self) -> u64 {
        self.aut
    }

    fn check(&self, host: &HostGraph, x: &RootTuple) -> Result<(), EngineError> {
        x.validate(host.n(), self.rg.v_g())
            .map_err(EngineError::BadRootTuple)
    }

    fn pinned(x: &RootTuple) -> Vec<(usize, u32)> {
        x.vertices().iter().copied().enumerate().collect()
    }

    /// Number of ordered extensions `Y_x`.
    pub fn ordered(&self, host: &HostGraph, x: &RootTuple) -> Result<u64, EngineError> {
        self.check(host, x)?;
        Ok(self.ordered_unchecked(host, x))
    }

    fn ordered_unchecked(&self, host: &HostGraph, x: &RootTuple) -> u64 {
        let mut m = Matcher::new(host, &self.rooted_plan);
        for (v, h) in Self::pinned(x) {
            m.pin(v, h);
        }
        let mut leaf = CountLeaf { total: 0 };
        m.descend(0, &mut leaf);
        leaf.total
    }

    /// Number of unordered extensions `X_x = Y_x / aut(G,H)`.
    pub fn unordered(&self, host: &HostGraph, x: &RootTuple) -> Result<u64, EngineError> {
        let y = self.ordered(host, x)?;
        divide(y, self.aut)
    }

    pub fn list(&self, host: &HostGraph, x: &RootTuple, cap: usize) -> Result<Vec<Extension>, EngineError> {
        self.check(host, x)?;
        let mut m = Matcher::new(host, &self.rooted_plan);
        for (v, h) in Self::pinned(x) {
            m.pin(v, h);
        }
        let mut leaf = ListLeaf {
            rg: &self.rg,
            edges: self.rg.extension_edges(),
            copies: BTreeMap::new(),
            ordered: 0,
            limit: (cap as u64).saturating_mul(self.aut),
        };
        m.descend(0, &mut leaf);
        if leaf.stopped() {
            return Err(EngineError::CapExceeded { cap });
        }
        let mut out = Vec::with_capacity(leaf.copies.len());
        for ((vertices, edges), orbit) in leaf.copies {
            if orbit != self.aut {
                return Err(EngineError::NotDivisible {
                    ordered: orbit,
                    aut: self.aut,
                });
            }
            out.push(Extension { vertices, edges });
        }
        Ok(out)
    }

    /// Whether `x` has exactly `r` extensions and they are pairwise disjoint
    /// outside the roots.
    pub fn disjoint_event(&self, host: &HostGraph, x: &RootTuple, r: u64, cap: usize) -> Result<bool, EngineError> {
        let exts = self.list(host, x, cap)?;
        if exts.len() as u64 != r {
            return Ok(false);
        }
        let mut seen = std::collections::HashSet::new();
        Ok(exts
            .iter()
            .flat_map(|e| e.vertices.iter())
            .all(|&v| seen.insert(v)))
    }

    /// `X_x` for every root tuple, from one global enumeration.
    pub fn all_roots(&self, host: &HostGraph, exec: Execution) -> Result<ExtensionStats, EngineError> {
        let (n, v_g) = (host.n(), self.rg.v_g());
        if n < self.rg.v_h() {
            return Err(EngineError::HostTooSmall { n, v_h: self.rg.v_h() });
        }
        let slots = (0..v_g).try_fold(1usize, |acc, _| acc.checked_mul(n));
        let slots = match slots {
            Some(s) if s <= MAX_DENSE_TALLY => s,
            _ => return Err(EngineError::TooManyRootTuples { n, v_g }),
        };
        let plan = Plan::new(self.rg.pattern(), v_g, VertexSet::empty());
        let leaf = enumerate_split(
            host,
            &plan,
            &[],
            exec,
            || TallyLeaf {
                n,
                v_g,
                counts: vec![0; slots],
            },
            |mut a, b| {
                for (x, y) in a.counts.iter_mut().zip(b.counts) {
                    *x += y;
                }
                a
            },
        );
        let counts = leaf
            .counts
            .into_iter()
            .map(|y| divide(y, self.aut))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExtensionStats::from_dense(n, v_g, counts))
    }
}

fn divide(ordered: u64, aut: u64) -> Result<u64, EngineError> {
    if !ordered.is_multiple_of(aut) {
        return Err(EngineError::NotDivisible { ordered, aut });
    }
    Ok(ordered / aut)
}

/// Per-root extension counts with extrema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionStats {
    n: usize,
    v_g: usize,
    counts: Vec<u64>,
    pub max_count: u64,
    pub min_count: u64,
    pub argmax: RootTuple,
    pub argmin: RootTuple,
}

impl ExtensionStats {
    fn from_dense(n: usize, v_g: usize, counts: Vec<u64>) -> Self {
        let mut stats = ExtensionStats {
            n,
            v_g,
            counts,
            max_count: 0,
            min_count: u64::MAX,
            argmax: RootTuple::default(),
            argmin: RootTuple::default(),
        };
        let mut best: Option<(u64, RootTuple, u64, RootTuple)> = None;
        for (tuple, count) in stats.iter() {
            best = Some(match best {
                None => (count, tuple.clone(), count, tuple),
                Some((hi, hx, lo, lx)) => {
                    let (hi, hx) = if count > hi { (count, tuple.clone()) } else { (hi, hx) };
                    let (lo, lx) = if count < lo { (count, tuple) } else { (lo, lx) };
                    (hi, hx, lo, lx)
                }
            });
        }
        if let Some((hi, hx, lo, lx)) = best {
            stats.max_count = hi;
            stats.argmax = hx;
            stats.min_count = lo;
            stats.argmin = lx;
        }
        stats
    }

    /// `X_x` for one tuple.
    pub fn get(&self, x: &RootTuple) -> Option<u64> {
        x.validate(self.n, self.v_g).ok()?;
        let idx = x
            .vertices()
            .iter()
            .fold(0, |acc, &v| acc * self.n + v as usize);
        Some(self.counts[idx])
    }

    /// All `(tuple, X_x)` pairs over ordered tuples of distinct vertices, in
    /// lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (RootTuple, u64)> + '_ {
        self.counts.iter().enumerate().filter_map(move |(idx, &c)| {
            let mut digits = vec![0u32; self.v_g];
            let mut rest = idx;
            for d in digits.iter_mut().rev() {
                *d = (rest % self.n) as u32;
                rest /= self.n;
            }
            let distinct = digits.iter().enumerate().all(|(i, v)| !digits[..i].contains(v));
            distinct.then_some((RootTuple(digits), c))
        })
    }

    pub fn root_count(&self) -> usize {
        self.v_g
    }
}

/// `Y_x`: ordered `(G,H)`-extensions of `x` in `host`.
pub fn count_ordered_extensions(host: &HostGraph, rg: &RootedGraph, x: &RootTuple) -> Result<u64, EngineError> {
    ExtensionCounter::new(rg).ordered(host, x)
}

/// `X_x = Y_x / aut(G,H)`.
pub fn count_extensions(host: &HostGraph, rg: &RootedGraph, x: &RootTuple) -> Result<u64, EngineError> {
    ExtensionCounter::new(rg).unordered(host, x)
}

/// Extrema of `X_x` over all ordered root tuples.
pub fn extension_extrema(host: &HostGraph, rg: &RootedGraph, exec: Execution) -> Result<ExtensionStats, EngineError> {
    ExtensionCounter::new(rg).all_roots(host, exec)
}

pub fn list_extensions(host: &HostGraph, rg: &RootedGraph, x: &RootTuple, cap: usize) -> Result<Vec<Extension>, EngineError> {
    ExtensionCounter::new(rg).list(host, x, cap)
}

pub fn disjoint_event_check(host: &HostGraph, rg: &RootedGraph, x: &RootTuple, r: u64, cap: usize) -> Result<bool, EngineError> {
    ExtensionCounter::new(rg).disjoint_event(host, x, r, cap)
}

/// Ordered embeddings of `pattern` (every vertex free) into `host`.
pub fn count_ordered_embeddings(host: &HostGraph, pattern: &PatternGraph, exec: Execution) -> u64 {
    let plan = Plan::new(pattern, 0, VertexSet::empty());
    enumerate_split(
        host,
        &plan,
        &[],
        exec,
        || CountLeaf { total: 0 },
        |a, b| CountLeaf {
            total: a.total + b.total,
        },
    )
    .total
}

/// `Z_K(x)`: the number of copies of `k` containing each host vertex.
pub fn per_vertex_copy_counts(host: &HostGraph, k: &PatternGraph, exec: Execution) -> Result<Vec<u64>, EngineError> {
    let plan = Plan::new(k, 0, VertexSet::empty());
    let aut = root_fixing_automorphisms(k, 0);
    let n = host.n();
    let leaf = enumerate_split(
        host,
        &plan,
        &[],
        exec,
        || VertexLeaf {
            k: k.vertex_count(),
            z: vec![0; n],
        },
        |mut a, b| {
            for (x, y) in a.z.iter_mut().zip(b.z) {
                *x += y;
            }
            a
        },
    );
    leaf.z.into_iter().map(|z| divide(z, aut)).collect()
}
