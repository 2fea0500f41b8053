//! Density lattice of a rooted graph and its structural classification.
//!
//! Only induced intermediates `J` are enumerated: adding edges on a fixed
//! vertex set can only raise `d(G,J)` and lower `mu_{G,J}`, so the maximum
//! density and the minimum expectation are both attained at induced
//! subgraphs. The lattice of a rooted graph therefore has exactly
//! `2^(v_H - v_G)` nodes.

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{PatternGraph, RootedGraph, VertexSet};

/// Exact density value.
pub type Density = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("vertex set {0} is not a strict superset of the roots")]
    NotStrictSuperset(VertexSet),
    #[error("vertex set {0} does not contain all roots")]
    MissingRoots(VertexSet),
    #[error("vertex set {0} is not contained in V(H)")]
    OutOfRange(VertexSet),
    #[error("union of primal subgraphs {0} is not primal")]
    UnionNotPrimal(VertexSet),
    #[error("graph K must have at least one vertex and one edge")]
    EmptyGraph,
}

/// One vertex subset of `V(H)` containing all roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeNode {
    pub vertex_subset: VertexSet,
    pub induced_edge_count: usize,
    #[serde(serialize_with = "serialize_opt_ratio")]
    pub density: Option<Density>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremCase {
    /// Strictly balanced and grounded.
    ThmStrBalGrounded,
    /// Strictly balanced, not grounded.
    ThmStrBalUngrounded,
    /// Unique primal, and it is grounded.
    ThmUniqueGroundedPrimal,
    /// No primal subgraph is grounded.
    ThmNoGroundedPrimal,
    /// Only the general approximate result applies.
    GeneralOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    #[serde(serialize_with = "serialize_ratio")]
    pub m_value: Density,
    pub strictly_balanced: bool,
    pub grounded: bool,
    pub primal_subsets: Vec<LatticeNode>,
    pub j_max: LatticeNode,
    pub has_grounded_primal: bool,
    pub unique_primal: bool,
    pub theorem_case: TheoremCase,
    pub applicable_cases: Vec<TheoremCase>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnrootedAnalysis {
    pub balanced: bool,
    pub g_min: VertexSet,
    #[serde(serialize_with = "serialize_ratio")]
    pub d_k: Density,
}

/// Formats a rational as `num/den`.
pub fn ratio_string<T: std::fmt::Display + Clone + num_integer::Integer>(r: &Ratio<T>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn serialize_ratio<S: Serializer>(r: &Density, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(r))
}

fn serialize_opt_ratio<S: Serializer>(r: &Option<Density>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&ratio_string(r)),
        None => s.serialize_none(),
    }
}

/// `d(G,J) = (e_J - e_G)/(v_J - v_G)` for any root set, without requiring
/// `J` to be a strict superset. Returns `None` when `v_J = v_G`.
pub(crate) fn density_for(pattern: &PatternGraph, roots: VertexSet, subset: VertexSet) -> Option<Density> {
    let dv = subset.len() as i64 - roots.len() as i64;
    if dv <= 0 {
        return None;
    }
    let de = pattern.induced_edge_count(subset) as i64 - pattern.induced_edge_count(roots) as i64;
    Some(Ratio::new(de, dv))
}

/// All supersets of `roots` inside `V(pattern)`, in increasing mask order.
pub(crate) fn supersets(pattern: &PatternGraph, roots: VertexSet) -> Vec<VertexSet> {
    let free = pattern.vertices().difference(roots).0;
    let mut out = Vec::with_capacity(1 << free.count_ones());
    let mut sub = 0u32;
    loop {
        out.push(VertexSet(roots.0 | sub));
        if sub == free {
            break;
        }
        sub = (sub.wrapping_sub(free)) & free;
    }
    out.sort();
    out
}

/// `m(J, H)` for an arbitrary root set `roots` of `pattern`: the maximum of
/// `d(roots, J')` over `roots ⊊ J' ⊆ V(H)`. `None` if `roots = V(H)`.
pub fn m_value_for_roots(pattern: &PatternGraph, roots: VertexSet) -> Option<Density> {
    supersets(pattern, roots)
        .into_iter()
        .filter_map(|s| density_for(pattern, roots, s))
        .max()
}

fn check_contains_roots(rg: &RootedGraph, subset: VertexSet) -> Result<(), ClassifyError> {
    if !subset.is_subset_of(rg.pattern().vertices()) {
        return Err(ClassifyError::OutOfRange(subset));
    }
    if !rg.roots().is_subset_of(subset) {
        return Err(ClassifyError::MissingRoots(subset));
    }
    Ok(())
}

/// `d(G,J)` for the induced subgraph `J` on `subset`.
pub fn density(rg: &RootedGraph, subset: VertexSet) -> Result<Density, ClassifyError> {
    check_contains_roots(rg, subset).map_err(|e| match e {
        ClassifyError::MissingRoots(s) => ClassifyError::NotStrictSuperset(s),
        other => other,
    })?;
    density_for(rg.pattern(), rg.roots(), subset).ok_or(ClassifyError::NotStrictSuperset(subset))
}

pub fn enumerate_lattice(rg: &RootedGraph) -> Vec<LatticeNode> {
    supersets(rg.pattern(), rg.roots())
        .into_iter()
        .map(|s| LatticeNode {
            vertex_subset: s,
            induced_edge_count: rg.pattern().induced_edge_count(s),
            density: density_for(rg.pattern(), rg.roots(), s),
        })
        .collect()
}

pub fn m_value(rg: &RootedGraph) -> Density {
    m_value_for_roots(rg.pattern(), rg.roots()).expect("rooted graph has a non-root vertex")
}

pub fn is_strictly_balanced(rg: &RootedGraph) -> bool {
    let full = rg.pattern().vertices();
    let d_h = density_for(rg.pattern(), rg.roots(), full).expect("non-root vertex");
    enumerate_lattice(rg)
        .iter()
        .filter(|node| node.vertex_subset != full)
        .filter_map(|node| node.density)
        .all(|d| d < d_h)
}

pub fn is_grounded(rg: &RootedGraph) -> bool {
    grounded_in(rg, rg.pattern().vertices())
}

/// Whether the induced subgraph on `subset` has a root adjacent to a
/// non-root vertex of `subset`.
pub fn is_grounded_subset(rg: &RootedGraph, subset: VertexSet) -> Result<bool, ClassifyError> {
    check_contains_roots(rg, subset)?;
    Ok(grounded_in(rg, subset))
}

fn grounded_in(rg: &RootedGraph, subset: VertexSet) -> bool {
    let others = subset.difference(rg.roots()).0;
    rg.roots()
        .iter()
        .any(|r| rg.pattern().neighbors(r).0 & others != 0)
}

/// Full structural classification of `(G, H)`.
pub fn classify(rg: &RootedGraph) -> Result<ClassificationReport, ClassifyError> {
    let lattice = enumerate_lattice(rg);
    let m = m_value(rg);
    let primal_subsets: Vec<LatticeNode> = lattice
        .iter()
        .filter(|node| node.density == Some(m))
        .cloned()
        .collect();

    let union = primal_subsets
        .iter()
        .fold(VertexSet::empty(), |acc, node| acc.union(node.vertex_subset));
    let j_max = primal_subsets
        .iter()
        .find(|node| node.vertex_subset == union)
        .cloned()
        .ok_or(ClassifyError::UnionNotPrimal(union))?;

    let strictly_balanced = is_strictly_balanced(rg);
    let grounded = is_grounded(rg);
    let unique_primal = primal_subsets.len() == 1;
    let grounded_flags: Vec<bool> = primal_subsets
        .iter()
        .map(|node| grounded_in(rg, node.vertex_subset))
        .collect();
    let has_grounded_primal = grounded_flags.iter().any(|&g| g);

    let mut applicable_cases = Vec::new();
    if strictly_balanced && grounded {
        applicable_cases.push(TheoremCase::ThmStrBalGrounded);
    }
    if strictly_balanced && !grounded {
        applicable_cases.push(TheoremCase::ThmStrBalUngrounded);
    }
    if unique_primal && grounded_flags[0] {
        applicable_cases.push(TheoremCase::ThmUniqueGroundedPrimal);
    }
    if !has_grounded_primal {
        applicable_cases.push(TheoremCase::ThmNoGroundedPrimal);
    }
    if applicable_cases.is_empty() {
        applicable_cases.push(TheoremCase::GeneralOnly);
    }

    Ok(ClassificationReport {
        m_value: m,
        strictly_balanced,
        grounded,
        primal_subsets,
        j_max,
        has_grounded_primal,
        unique_primal,
        theorem_case: applicable_cases[0],
        applicable_cases,
    })
}

/// `m(J_max, H)` after re-rooting at `J_max`, or `None` when `J_max = V(H)`.
pub fn m_value_above_jmax(rg: &RootedGraph) -> Result<Option<Density>, ClassifyError> {
    let report = classify(rg)?;
    Ok(m_value_for_roots(rg.pattern(), report.j_max.vertex_subset))
}

/// Density analysis of an unrooted graph `K`: primal subgraphs maximize
/// `e_J / v_J`, `K` is balanced when it is itself primal, and `g_min` is the
/// primal with the fewest vertices (ties: lexicographically smallest labels).
pub fn unrooted_analysis(k: &PatternGraph) -> Result<UnrootedAnalysis, ClassifyError> {
    if k.edge_count() == 0 {
        return Err(ClassifyError::EmptyGraph);
    }
    let mut best: Option<(Density, VertexSet)> = None;
    for s in supersets(k, VertexSet::empty()).into_iter().skip(1) {
        let d = density_for(k, VertexSet::empty(), s).expect("non-empty subset");
        best = match best {
            None => Some((d, s)),
            Some((bd, bs)) if d > bd || (d == bd && s.size_then_lex(bs).is_lt()) => Some((d, s)),
            keep => keep,
        };
    }
    let (max_density, g_min) = best.expect("at least one vertex");
    let d_k = Ratio::new(k.edge_count() as i64, k.vertex_count() as i64);
    Ok(UnrootedAnalysis {
        balanced: d_k == max_density,
        g_min,
        d_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin_fixture;

    fn fx(name: &str) -> RootedGraph {
        builtin_fixture(name).unwrap()
    }

    fn set(labels: &[usize]) -> VertexSet {
        VertexSet::from_labels(labels.iter().copied())
    }

    #[test]
    fn densities() {
        let tri = fx("tri_root");
        assert_eq!(density(&tri, set(&[1, 2, 3])).unwrap(), Ratio::new(3, 2));
        assert_eq!(density(&tri, set(&[1, 2])).unwrap(), Ratio::from_integer(1));
        assert_eq!(density(&fx("fig1b"), set(&[1, 2, 3, 4])).unwrap(), Ratio::from_integer(1));
        assert!(matches!(
            density(&tri, set(&[1])),
            Err(ClassifyError::NotStrictSuperset(_))
        ));
        assert!(matches!(
            density(&tri, set(&[2, 3])),
            Err(ClassifyError::NotStrictSuperset(_))
        ));
    }

    #[test]
    fn lattice_sizes() {
        let tri = enumerate_lattice(&fx("tri_root"));
        let subsets: Vec<_> = tri.iter().map(|n| n.vertex_subset).collect();
        assert_eq!(subsets, vec![set(&[1]), set(&[1, 2]), set(&[1, 3]), set(&[1, 2, 3])]);
        assert_eq!(tri[0].density, None);
        assert_eq!(enumerate_lattice(&fx("path3")).len(), 4);
        assert_eq!(enumerate_lattice(&fx("fig2f")).len(), 32);
    }

    #[test]
    fn m_values() {
        assert_eq!(m_value(&fx("tri_root")), Ratio::new(3, 2));
        assert_eq!(m_value(&fx("fig1c")), Ratio::new(3, 2));
        assert_eq!(density(&fx("fig1c"), set(&[1, 2, 3, 4])).unwrap(), Ratio::new(4, 3));
        assert_eq!(m_value(&fx("fig2e")), Ratio::from_integer(2));
        assert_eq!(m_value(&fx("fig1d")), Ratio::new(3, 2));
    }

    #[test]
    fn balance_and_grounding() {
        assert!(is_strictly_balanced(&fx("fig1a")));
        assert!(is_strictly_balanced(&fx("fig1b")));
        assert!(!is_strictly_balanced(&fx("fig1c")));
        assert!(is_grounded(&fx("fig1a")));
        assert!(!is_grounded(&fx("fig1b")));
        assert!(!is_grounded_subset(&fx("fig1d"), set(&[1, 6, 7, 8, 9])).unwrap());
        assert!(is_grounded_subset(&fx("fig1d"), set(&[1, 2])).unwrap());
        assert!(is_grounded_subset(&fx("fig1d"), set(&[2, 3])).is_err());
    }

    #[test]
    fn classification_cases() {
        let c = classify(&fx("fig1c")).unwrap();
        assert_eq!(c.theorem_case, TheoremCase::ThmUniqueGroundedPrimal);
        assert_eq!(c.j_max.vertex_subset, set(&[1, 2, 3]));

        let d = classify(&fx("fig1d")).unwrap();
        assert_eq!(d.theorem_case, TheoremCase::ThmNoGroundedPrimal);
        assert_eq!(d.j_max.vertex_subset, set(&[1, 6, 7, 8, 9]));
        assert!(d.unique_primal);

        let e = classify(&fx("fig2e")).unwrap();
        assert_eq!(e.theorem_case, TheoremCase::GeneralOnly);
        let primals: Vec<_> = e.primal_subsets.iter().map(|n| n.vertex_subset).collect();
        assert_eq!(primals, vec![set(&[1, 2, 3, 4]), set(&[1, 2, 3, 4, 5])]);

        let a = classify(&fx("fig1a")).unwrap();
        assert_eq!(
            a.applicable_cases,
            vec![TheoremCase::ThmStrBalGrounded, TheoremCase::ThmUniqueGroundedPrimal]
        );
        let b = classify(&fx("fig1b")).unwrap();
        assert_eq!(
            b.applicable_cases,
            vec![TheoremCase::ThmStrBalUngrounded, TheoremCase::ThmNoGroundedPrimal]
        );
    }

    #[test]
    fn report_json_uses_fraction_strings() {
        let json = serde_json::to_value(classify(&fx("fig1c")).unwrap()).unwrap();
        assert_eq!(json["m_value"], "3/2");
        assert_eq!(json["j_max"]["vertex_subset"], serde_json::json!([1, 2, 3]));
        assert_eq!(json["theorem_case"], "ThmUniqueGroundedPrimal");
    }

    #[test]
    fn unrooted() {
        let tri = unrooted_analysis(&PatternGraph::complete(3).unwrap()).unwrap();
        assert!(tri.balanced);
        assert_eq!(tri.d_k, Ratio::from_integer(1));
        assert_eq!(tri.g_min, VertexSet::prefix(3));

        let k4 = unrooted_analysis(&PatternGraph::complete(4).unwrap()).unwrap();
        assert!(k4.balanced);
        assert_eq!(k4.d_k, Ratio::new(3, 2));
        assert_eq!(k4.g_min, VertexSet::prefix(4));

        let matching = PatternGraph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let m = unrooted_analysis(&matching).unwrap();
        assert!(m.balanced);
        assert_eq!(m.d_k, Ratio::new(1, 2));
        assert_eq!(m.g_min, VertexSet::from_vertices([0, 1]));

        let star_plus = PatternGraph::new(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!unrooted_analysis(&star_plus).unwrap().balanced);
        assert_eq!(
            unrooted_analysis(&PatternGraph::new(2, &[]).unwrap()),
            Err(ClassifyError::EmptyGraph)
        );
    }
}
