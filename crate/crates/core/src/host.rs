//! Concrete host graphs on `n` vertices.

use std::fmt;

use thiserror::Error;

/// Hosts up to this size also keep one adjacency bitset row per vertex.
pub const BITSET_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HostError {
    #[error("host vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at host vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate host edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// An undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct HostGraph {
    n: usize,
    adj: Vec<Vec<u32>>,
    rows: Option<Vec<u64>>,
    words: usize,
    edge_count: usize,
}

impl fmt::Debug for HostGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HostGraph")
            .field("n", &self.n)
            .field("edge_count", &self.edge_count)
            .finish()
    }
}

impl HostGraph {
    /// Builds a host from 0-based edges, rejecting loops and duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, HostError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(HostError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(HostError::SelfLoop(a));
            }
            adj[a].push(b as u32);
            adj[b].push(a as u32);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (v.min(w[0] as usize), v.max(w[0] as usize));
                return Err(HostError::DuplicateEdge(a, b));
            }
        }
        Ok(Self::from_sorted_adjacency(n, adj))
    }

    /// Builds a host from adjacency lists that are already sorted, symmetric
    /// and free of loops and duplicates.
    pub(crate) fn from_sorted_adjacency(n: usize, adj: Vec<Vec<u32>>) -> Self {
        let words = n.div_ceil(64);
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let rows = (n <= BITSET_LIMIT).then(|| {
            let mut rows = vec![0u64; n * words];
            for (v, list) in adj.iter().enumerate() {
                let row = &mut rows[v * words..(v + 1) * words];
                for &u in list {
                    row[u as usize / 64] |= 1 << (u % 64);
                }
            }
            rows
        });
        HostGraph {
            n,
            adj,
            rows,
            words,
            edge_count,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_adjacency(n, vec![Vec::new(); n])
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| (0..n as u32).filter(|&u| u as usize != v).collect())
            .collect();
        Self::from_sorted_adjacency(n, adj)
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    /// Host whose edges are the set bits of `mask` over pairs `(i, j)`,
    /// `i < j`, enumerated in lexicographic order.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> bit & 1 == 1 {
                    adj[i].push(j as u32);
                    adj[j].push(i as u32);
                }
                bit += 1;
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self::from_sorted_adjacency(n, adj)
    }

    /// Parses the host edge-list format: first line `n`, then `a b` pairs
    /// with 1-based labels. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, HostError> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let malformed = |message: String| HostError::Malformed {
                line: idx + 1,
                message,
            };
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| malformed(format!("`{t}` is not an integer"))))
                .collect::<Result<_, _>>()?;
            match (n, nums.as_slice()) {
                (None, [count]) => n = Some(*count),
                (None, _) => return Err(malformed("first line must be the vertex count".into())),
                (Some(count), [a, b]) => {
                    for &l in &[*a, *b] {
                        if l == 0 || l > count {
                            return Err(HostError::VertexOutOfRange { vertex: l, n: count });
                        }
                    }
                    edges.push((a - 1, b - 1));
                }
                (Some(_), _) => return Err(malformed("expected an edge `a b`".into())),
            }
        }
        let n = n.ok_or(HostError::Malformed {
            line: 1,
            message: "empty host file".into(),
        })?;
        Self::from_edges(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (a, b) in self.edges() {
            out.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        match &self.rows {
            Some(rows) => rows[a * self.words + b / 64] >> (b % 64) & 1 == 1,
            None => self.adj[a].binary_search(&(b as u32)).is_ok(),
        }
    }

    /// Edges `(a, b)` with `a < b` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, list)| {
            list.iter()
                .filter(move |&&b| b as usize > a)
                .map(move |&b| (a, b as usize))
        })
    }

    /// A copy with one extra edge (no-op if already present).
    pub fn with_edge(&self, a: usize, b: usize) -> Self {
        assert!(a != b && a < self.n && b < self.n);
        if self.has_edge(a, b) {
            return self.clone();
        }
        let mut adj = self.adj.clone();
        for (x, y) in [(a, b), (b, a)] {
            let pos = adj[x].binary_search(&(y as u32)).unwrap_err();
            adj[x].insert(pos, y as u32);
        }
        Self::from_sorted_adjacency(self.n, adj)
    }

    /// The graph with vertices renamed by `perm` (`v -> perm[v]`).
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        Self::from_edges(self.n, self.edges().map(|(a, b)| (perm[a], perm[b]))).expect("permutation")
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn row(&self, v: usize) -> Option<&[u64]> {
        self.rows
            .as_ref()
            .map(|rows| &rows[v * self.words..(v + 1) * self.words])
    }

    pub(crate) fn has_bitsets(&self) -> bool {
        self.rows.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_queries() {
        let g = HostGraph::from_edges(4, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(3, 0));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(HostGraph::complete(5).edge_count(), 10);
        assert_eq!(HostGraph::cycle(5).degree(3), 2);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(HostGraph::from_edges(3, [(1, 1)]), Err(HostError::SelfLoop(1)));
        assert_eq!(
            HostGraph::from_edges(3, [(0, 1), (1, 0)]),
            Err(HostError::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            HostGraph::from_edges(3, [(0, 3)]),
            Err(HostError::VertexOutOfRange { vertex: 3, .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let g = HostGraph::parse("4 # vertices\n1 2\n2 3\n\n4 1\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(0, 3));
        assert_eq!(HostGraph::parse(&g.to_text()).unwrap(), g);
        assert!(HostGraph::parse("3\n1 4\n").is_err());
        assert!(HostGraph::parse("3\n1\n").is_err());
    }

    #[test]
    fn pair_mask_and_edge_insertion() {
        let g = HostGraph::from_pair_mask(4, 0b100001);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);
        let h = g.with_edge(1, 3);
        assert!(h.has_edge(3, 1));
        assert_eq!(h.edge_count(), 3);
    }

    #[test]
    fn large_hosts_use_lists() {
        let n = BITSET_LIMIT + 10;
        let g = HostGraph::from_edges(n, [(0, n - 1), (5, 7)]).unwrap();
        assert!(!g.has_bitsets());
        assert!(g.has_edge(n - 1, 0));
        assert!(!g.has_edge(5, 6));
    }
}
