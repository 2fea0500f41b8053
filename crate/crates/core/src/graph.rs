//! Pattern graphs, rooted graphs and root-fixing automorphisms.
//!
//! Vertices are 0-based internally. Every text format and every
//! human-facing report uses 1-based labels.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest supported pattern graph.
pub const MAX_PATTERN_VERTICES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex label {label} out of range 1..={vertex_count}")]
    LabelOutOfRange { label: usize, vertex_count: usize },
    #[error("pattern has {0} vertices; at most {MAX_PATTERN_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("pattern must have at least one vertex")]
    NoVertices,
    #[error("root count {root_count} must be smaller than vertex count {vertex_count}")]
    TooManyRoots {
        root_count: usize,
        vertex_count: usize,
    },
    #[error("H must have more edges than G (e_H = {e_h}, e_G = {e_g})")]
    NoExtensionEdges { e_h: usize, e_g: usize },
    #[error("root set contains duplicate or out-of-range vertex {0}")]
    BadRootSet(usize),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

/// A set of pattern vertices stored as a bitmask (bit `i` = vertex `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet(0)
    }

    /// The first `k` vertices `{0, .., k-1}`.
    pub fn prefix(k: usize) -> Self {
        if k >= 32 {
            VertexSet(u32::MAX)
        } else {
            VertexSet((1u32 << k) - 1)
        }
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> Self {
        VertexSet(vs.into_iter().fold(0, |m, v| m | (1 << v)))
    }

    /// Builds a set from 1-based labels.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        Self::from_vertices(labels.into_iter().map(|l| l - 1))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|v| v + 1).collect()
    }

    /// Ordering used for tie-breaks: fewer vertices first, then the
    /// lexicographically smaller sorted label list.
    pub fn size_then_lex(self, other: VertexSet) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.labels().cmp(&other.labels()))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.labels().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

/// A simple undirected graph on at most 16 vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternGraph {
    vertex_count: usize,
    adj: [u32; MAX_PATTERN_VERTICES],
}

impl PatternGraph {
    /// Builds a graph from 0-based edges.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::NoVertices);
        }
        if vertex_count > MAX_PATTERN_VERTICES {
            return Err(GraphError::TooManyVertices(vertex_count));
        }
        let mut adj = [0u32; MAX_PATTERN_VERTICES];
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(GraphError::LabelOutOfRange {
                        label: v + 1,
                        vertex_count,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a + 1));
            }
            if adj[a] >> b & 1 == 1 {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                return Err(GraphError::DuplicateEdge(lo + 1, hi + 1));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(PatternGraph { vertex_count, adj })
    }

    /// Builds a graph from 1-based labeled edges.
    pub fn from_labels(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut zero_based = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            for l in [a, b] {
                if l == 0 || l > vertex_count {
                    return Err(GraphError::LabelOutOfRange {
                        label: l,
                        vertex_count,
                    });
                }
            }
            zero_based.push((a - 1, b - 1));
        }
        Self::new(vertex_count, &zero_based)
    }

    pub fn complete(k: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .collect();
        Self::new(k, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::prefix(self.vertex_count)
    }

    /// Neighbourhood of `v` as a bitmask.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj[..self.vertex_count]
            .iter()
            .map(|m| m.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.vertex_count {
            for b in VertexSet(self.adj[a] & !((2u32 << a) - 1)).iter() {
                out.push((a, b));
            }
        }
        out
    }

    /// Number of edges with both endpoints in `set`.
    pub fn induced_edge_count(&self, set: VertexSet) -> usize {
        set.iter()
            .map(|v| (self.adj[v] & set.0).count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Induced subgraph on `set`, relabeled in increasing vertex order.
    pub fn induced(&self, set: VertexSet) -> PatternGraph {
        self.relabeled(&set.iter().collect::<Vec<_>>())
    }

    /// Subgraph induced on `order`, where `order[i]` becomes vertex `i`.
    pub fn relabeled(&self, order: &[usize]) -> PatternGraph {
        let mut adj = [0u32; MAX_PATTERN_VERTICES];
        for (i, &vi) in order.iter().enumerate() {
            for (j, &vj) in order.iter().enumerate() {
                if self.has_edge(vi, vj) {
                    adj[i] |= 1 << j;
                }
            }
        }
        PatternGraph {
            vertex_count: order.len(),
            adj,
        }
    }
}

/// A rooted graph `(G, H)`: the pattern `H` whose first `root_count`
/// vertices induce the root graph `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedGraph {
    pattern: PatternGraph,
    root_count: usize,
}

impl RootedGraph {
    pub fn new(pattern: PatternGraph, root_count: usize) -> Result<Self, GraphError> {
        let vertex_count = pattern.vertex_count();
        if root_count >= vertex_count {
            return Err(GraphError::TooManyRoots {
                root_count,
                vertex_count,
            });
        }
        let rg = RootedGraph {
            pattern,
            root_count,
        };
        let (e_h, e_g) = (rg.e_h(), rg.e_g());
        if e_h <= e_g {
            return Err(GraphError::NoExtensionEdges { e_h, e_g });
        }
        Ok(rg)
    }

    /// Builds a rooted graph with an arbitrary (0-based) root list. Vertices
    /// are relabeled so the roots become `0..roots.len()` in the given order,
    /// followed by the remaining vertices in increasing order.
    pub fn with_roots(pattern: &PatternGraph, roots: &[usize]) -> Result<Self, GraphError> {
        let mut seen = VertexSet::empty();
        for &r in roots {
            if r >= pattern.vertex_count() || seen.contains(r) {
                return Err(GraphError::BadRootSet(r + 1));
            }
            seen = VertexSet(seen.0 | 1 << r);
        }
        let mut order = roots.to_vec();
        order.extend(pattern.vertices().difference(seen).iter());
        Self::new(pattern.relabeled(&order), roots.len())
    }

    pub fn pattern(&self) -> &PatternGraph {
        &self.pattern
    }

    pub fn v_h(&self) -> usize {
        self.pattern.vertex_count()
    }

    pub fn v_g(&self) -> usize {
        self.root_count
    }

    pub fn e_h(&self) -> usize {
        self.pattern.edge_count()
    }

    pub fn e_g(&self) -> usize {
        self.pattern.induced_edge_count(self.roots())
    }

    /// Number of edges of `H_G`, i.e. `e_H - e_G`.
    pub fn extension_edge_count(&self) -> usize {
        self.e_h() - self.e_g()
    }

    pub fn roots(&self) -> VertexSet {
        VertexSet::prefix(self.root_count)
    }

    pub fn non_roots(&self) -> VertexSet {
        self.pattern.vertices().difference(self.roots())
    }

    /// Neighbourhood of `v` in `H_G` (edges between two roots removed).
    pub fn extension_neighbors(&self, v: usize) -> VertexSet {
        extension_neighbors(&self.pattern, self.root_count, v)
    }

    /// Edges of `H_G` in lexicographic order.
    pub fn extension_edges(&self) -> Vec<(usize, usize)> {
        self.pattern
            .edges()
            .into_iter()
            .filter(|&(a, b)| !(a < self.root_count && b < self.root_count))
            .collect()
    }

    /// Serializes to the graph file format.
    pub fn to_text(&self) -> String {
        let edges: Vec<String> = self
            .pattern
            .edges()
            .iter()
            .map(|&(a, b)| format!("{}-{}", a + 1, b + 1))
            .collect();
        format!("{} {}\n{}\n", self.v_g(), self.v_h(), edges.join(" "))
    }
}

impl fmt::Display for RootedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .pattern
            .edges()
            .iter()
            .map(|&(a, b)| format!("{}-{}", a + 1, b + 1))
            .collect();
        write!(
            f,
            "roots {} of {} vertices; edges {}",
            self.v_g(),
            self.v_h(),
            edges.join(" ")
        )
    }
}

impl FromStr for RootedGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rooted_graph(s)
    }
}

/// An ordered tuple of distinct host vertices (0-based) that the roots
/// `1..=v_G` are pinned to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RootTuple(pub Vec<u32>);

impl RootTuple {
    pub fn new(vertices: Vec<u32>) -> Self {
        RootTuple(vertices)
    }

    /// `(0, 1, ..., k-1)`, i.e. the labels `1..=k`.
    pub fn first(k: usize) -> Self {
        RootTuple((0..k as u32).collect())
    }

    /// Parses 1-based labels such as `3,7`.
    pub fn parse_labels(text: &str) -> Result<Self, String> {
        if text.trim().is_empty() {
            return Ok(RootTuple(Vec::new()));
        }
        text.split(',')
            .map(|t| match t.trim().parse::<u32>() {
                Ok(l) if l >= 1 => Ok(l - 1),
                _ => Err(format!("`{t}` is not a positive vertex label")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(RootTuple)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks length, range and distinctness against a host on `n` vertices.
    pub fn validate(&self, n: usize, root_count: usize) -> Result<(), String> {
        if self.0.len() != root_count {
            return Err(format!(
                "root tuple has {} entries, expected {root_count}",
                self.0.len()
            ));
        }
        for (i, &v) in self.0.iter().enumerate() {
            if v as usize >= n {
                return Err(format!("root vertex {} out of range for n = {n}", v + 1));
            }
            if self.0[..i].contains(&v) {
                return Err(format!("root vertex {} repeated", v + 1));
            }
        }
        Ok(())
    }
}

impl fmt::Display for RootTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.0.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "({})", labels.join(","))
    }
}

pub(crate) fn extension_neighbors(pattern: &PatternGraph, root_count: usize, v: usize) -> VertexSet {
    let n = pattern.neighbors(v);
    if v < root_count {
        n.difference(VertexSet::prefix(root_count))
    } else {
        n
    }
}

/// Parses the graph file format: a header `<v_G> <v_H>` followed by
/// whitespace-separated edges `a-b` with `1 <= a < b <= v_H`. `#` starts a
/// comment that runs to the end of the line.
pub fn parse_rooted_graph(text: &str) -> Result<RootedGraph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let mut tokens = line.split_whitespace().peekable();
        if tokens.peek().is_none() {
            continue;
        }
        let Some((_, v_h)) = header else {
            let toks: Vec<&str> = tokens.collect();
            if toks.len() != 2 {
                return Err(malformed(line_no, "header must be `<v_G> <v_H>`"));
            }
            let v_g = parse_count(toks[0], line_no)?;
            let v_h = parse_count(toks[1], line_no)?;
            if v_h == 0 {
                return Err(GraphError::NoVertices);
            }
            if v_h > MAX_PATTERN_VERTICES {
                return Err(GraphError::TooManyVertices(v_h));
            }
            if v_g >= v_h {
                return Err(GraphError::TooManyRoots {
                    root_count: v_g,
                    vertex_count: v_h,
                });
            }
            header = Some((v_g, v_h));
            continue;
        };
        for tok in tokens {
            let (a, b) = tok
                .split_once('-')
                .ok_or_else(|| malformed(line_no, &format!("expected edge `a-b`, got `{tok}`")))?;
            let a = parse_count(a, line_no)?;
            let b = parse_count(b, line_no)?;
            for l in [a, b] {
                if l == 0 || l > v_h {
                    return Err(GraphError::LabelOutOfRange {
                        label: l,
                        vertex_count: v_h,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if a > b {
                return Err(malformed(
                    line_no,
                    &format!("edge `{tok}` must list the smaller label first"),
                ));
            }
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            edges.push((a, b));
        }
    }

    let (v_g, v_h) = header.ok_or_else(|| malformed(1, "missing header `<v_G> <v_H>`"))?;
    RootedGraph::new(PatternGraph::from_labels(v_h, &edges)?, v_g)
}

fn malformed(line: usize, message: &str) -> GraphError {
    GraphError::Malformed {
        line,
        message: message.to_string(),
    }
}

fn parse_count(tok: &str, line: usize) -> Result<usize, GraphError> {
    tok.parse()
        .map_err(|_| malformed(line, &format!("`{tok}` is not a non-negative integer")))
}

/// Number of automorphisms of `H_G` that fix every root individually.
pub fn automorphism_count(rg: &RootedGraph) -> u64 {
    root_fixing_automorphisms(rg.pattern(), rg.v_g())
}

/// Root-fixing automorphism count for a pattern whose first `root_count`
/// vertices are roots. Does not require `e_H > e_G`; with `root_count == 0`
/// this is the full automorphism group order.
pub fn root_fixing_automorphisms(pattern: &PatternGraph, root_count: usize) -> u64 {
    let k = pattern.vertex_count();
    let adj: Vec<u32> = (0..k)
        .map(|v| extension_neighbors(pattern, root_count, v).0)
        .collect();
    let mut image = [0usize; MAX_PATTERN_VERTICES];
    for (r, slot) in image.iter_mut().enumerate().take(root_count) {
        *slot = r;
    }
    let used = VertexSet::prefix(root_count).0;
    extend_automorphism(&adj, k, root_count, &mut image, used)
}

fn extend_automorphism(adj: &[u32], k: usize, next: usize, image: &mut [usize], used: u32) -> u64 {
    if next == k {
        return 1;
    }
    let mut total = 0;
    for cand in VertexSet(VertexSet::prefix(k).0 & !used).iter() {
        if adj[cand].count_ones() != adj[next].count_ones() {
            continue;
        }
        let consistent = (0..next).all(|j| {
            let original = adj[next] >> j & 1;
            let mapped = adj[cand] >> image[j] & 1;
            original == mapped
        });
        if consistent {
            image[next] = cand;
            total += extend_automorphism(adj, k, next + 1, image, used | 1 << cand);
        }
    }
    total
}

/// Names accepted by [`builtin_fixture`].
pub const FIXTURE_NAMES: [&str; 8] = [
    "fig1a", "fig1b", "fig1c", "fig1d", "fig2e", "fig2f", "tri_root", "path3",
];

/// The rooted graphs used throughout the test suite and presets.
///
/// * `fig1a`, `tri_root`: triangle through the root.
/// * `fig1b`: root isolated from a triangle.
/// * `fig1c`: triangle through the root with a pendant edge.
/// * `fig1d`: root joined to a `K4` by a path with five edges.
/// * `fig2e`: `K4` through the root plus a vertex adjacent to two of its
///   non-root vertices.
/// * `fig2f`: `fig2e` with a second such vertex.
/// * `path3`: path with three edges between two roots.
pub fn builtin_fixture(name: &str) -> Result<RootedGraph, GraphError> {
    let (roots, vertices, edges): (usize, usize, &[(usize, usize)]) = match name {
        "fig1a" | "tri_root" => (1, 3, &[(1, 2), (1, 3), (2, 3)]),
        "fig1b" => (1, 4, &[(2, 3), (3, 4), (2, 4)]),
        "fig1c" => (1, 4, &[(1, 2), (1, 3), (2, 3), (3, 4)]),
        "fig1d" => (
            1,
            9,
            &[
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 7),
                (6, 8),
                (6, 9),
                (7, 8),
                (7, 9),
                (8, 9),
            ],
        ),
        "fig2e" => (
            1,
            5,
            &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (2, 5), (3, 5)],
        ),
        "fig2f" => (
            1,
            6,
            &[
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
                (2, 5),
                (3, 5),
                (2, 6),
                (3, 6),
            ],
        ),
        "path3" => (2, 4, &[(1, 3), (3, 4), (2, 4)]),
        other => return Err(GraphError::UnknownFixture(other.to_string())),
    };
    RootedGraph::new(PatternGraph::from_labels(vertices, edges)?, roots)
}

/// Resolves a fixture name, falling back to reading a graph file.
pub fn load_rooted_graph(spec: &str) -> Result<RootedGraph, Box<dyn std::error::Error + Send + Sync>> {
    match builtin_fixture(spec) {
        Ok(rg) => Ok(rg),
        Err(GraphError::UnknownFixture(_)) => {
            let text = std::fs::read_to_string(spec)
                .map_err(|e| format!("`{spec}` is neither a fixture nor a readable file: {e}"))?;
            Ok(parse_rooted_graph(&text)?)
        }
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn brute_force_aut(rg: &RootedGraph) -> u64 {
        let non_roots: Vec<usize> = rg.non_roots().iter().collect();
        let edges = rg.extension_edges();
        let mut count = 0;
        for perm in non_roots.iter().copied().permutations(non_roots.len()) {
            let map = |v: usize| {
                if v < rg.v_g() {
                    v
                } else {
                    perm[v - rg.v_g()]
                }
            };
            if edges.iter().all(|&(a, b)| {
                let (x, y) = (map(a), map(b));
                rg.extension_neighbors(x).contains(y)
            }) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn parses_triangle_at_root() {
        let rg = parse_rooted_graph("1 3\n1-2 1-3 2-3\n").unwrap();
        assert_eq!(rg, builtin_fixture("tri_root").unwrap());
        assert_eq!(rg.e_h(), 3);
        assert_eq!(rg.e_g(), 0);
    }

    #[test]
    fn parses_detached_triangle() {
        let rg = parse_rooted_graph("1 4\n2-3 3-4 2-4\n").unwrap();
        assert_eq!(rg, builtin_fixture("fig1b").unwrap());
    }

    #[test]
    fn parse_accepts_comments_and_split_lines() {
        let rg = parse_rooted_graph("# header next\n1 3  # roots, vertices\n1-2\n1-3 # two\n").unwrap();
        assert_eq!(rg.e_h(), 2);
    }

    #[test]
    fn parse_diagnostics_are_distinct() {
        assert!(matches!(
            parse_rooted_graph("0 2\n"),
            Err(GraphError::NoExtensionEdges { e_h: 0, e_g: 0 })
        ));
        assert!(matches!(
            parse_rooted_graph("1 3\n1-2 1-2\n"),
            Err(GraphError::DuplicateEdge(1, 2))
        ));
        assert!(matches!(parse_rooted_graph("1 3\n2-2\n"), Err(GraphError::SelfLoop(2))));
        assert!(matches!(
            parse_rooted_graph("3 3\n1-2\n"),
            Err(GraphError::TooManyRoots { .. })
        ));
        assert!(matches!(
            parse_rooted_graph("1 3\n1+2\n"),
            Err(GraphError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            parse_rooted_graph("1 3 7\n1-2\n"),
            Err(GraphError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_rooted_graph("1 3\n1-4\n"),
            Err(GraphError::LabelOutOfRange { label: 4, .. })
        ));
        assert!(matches!(
            parse_rooted_graph("1 17\n1-2\n"),
            Err(GraphError::TooManyVertices(17))
        ));
        // edges inside G only do not count
        assert!(matches!(
            parse_rooted_graph("2 3\n1-2\n"),
            Err(GraphError::NoExtensionEdges { e_h: 1, e_g: 1 })
        ));
    }

    #[test]
    fn serialization_sorts_edges() {
        let rg = parse_rooted_graph("1 4\n3-4 1-3 1-2 2-3").unwrap();
        assert_eq!(rg.to_text(), "1 4\n1-2 1-3 2-3 3-4\n");
    }

    #[test]
    fn fixture_automorphisms() {
        let expect = [
            ("tri_root", 2),
            ("fig1a", 2),
            ("fig1b", 6),
            ("fig1c", 1),
            ("fig1d", 6),
            ("fig2e", 2),
            ("fig2f", 4),
            ("path3", 1),
        ];
        for (name, aut) in expect {
            let rg = builtin_fixture(name).unwrap();
            assert_eq!(brute_force_aut(&rg), aut, "oracle {name}");
            assert_eq!(automorphism_count(&rg), aut, "{name}");
        }
    }

    #[test]
    fn fixture_shapes() {
        let c = builtin_fixture("fig1c").unwrap();
        assert_eq!(c.v_g(), 1);
        assert!(c.pattern().has_edge(2, 3));
        let e = builtin_fixture("fig2e").unwrap();
        assert_eq!(e.pattern().neighbors(4), VertexSet::from_labels([2, 3]));
        let f = builtin_fixture("fig2f").unwrap();
        assert_eq!(f.pattern().induced(VertexSet::prefix(5)), *e.pattern());
        assert!(matches!(builtin_fixture("fig3"), Err(GraphError::UnknownFixture(_))));
    }

    #[test]
    fn root_set_normalization() {
        // path 1-3-4-2 given with roots {3, 2} (0-based {2, 1})
        let p = PatternGraph::from_labels(4, &[(1, 3), (3, 4), (2, 4)]).unwrap();
        let rg = RootedGraph::with_roots(&p, &[0, 1]).unwrap();
        assert_eq!(rg, builtin_fixture("path3").unwrap());
        let swapped = RootedGraph::with_roots(&p, &[2, 3]).unwrap();
        assert_eq!(swapped.v_g(), 2);
        assert_eq!(swapped.e_g(), 1);
        assert!(RootedGraph::with_roots(&p, &[0, 0]).is_err());
    }

    #[test]
    fn vertex_set_display_and_order() {
        let s = VertexSet::from_labels([3, 1]);
        assert_eq!(s.to_string(), "{1,3}");
        let t = VertexSet::from_labels([1, 2]);
        assert_eq!(t.size_then_lex(s), std::cmp::Ordering::Less);
        assert_eq!(VertexSet::prefix(2).size_then_lex(s), std::cmp::Ordering::Less);
    }
}
