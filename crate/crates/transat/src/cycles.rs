//! Enumeration of all chord-free cycles of a relation graph.
//!
//! A chord of a simple cycle is a graph edge joining two vertices that are
//! not adjacent on the cycle; the chord-free cycles are the minimal carriers
//! of transitivity violations, so they are exactly the cycles the direct
//! constraint encoding has to cover.
//!
//! The enumerator grows chord-free paths breadth first, level by level.
//! Every proper prefix of a chord-free path is itself chord-free and still
//! extensible, so pruning is exact: a path is dropped the moment it revisits
//! a vertex or picks up a chord, and emitted as a cycle the moment an edge
//! back to its first vertex exists. Each geometric cycle is produced exactly
//! once by seeding paths only at their minimum vertex and keeping the
//! direction whose second vertex is smaller than its last.

use thiserror::Error;

use crate::eqgraph::RelationGraph;
use crate::Vertex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycleError {
    #[error("enumeration limit exceeded: {cycles_found} cycles, {paths_created} paths at cut-off")]
    LimitExceeded { cycles_found: u64, paths_created: u64 },
    #[error("not a valid cycle: {0}")]
    MalformedCycle(String),
}

/// Caps on the breadth-first expansion, guarding the exponential worst case.
#[derive(Debug, Clone, Copy)]
pub struct EnumLimits {
    /// Maximum number of paths ever admitted to a frontier.
    pub max_paths: u64,
    /// Maximum number of cycles emitted.
    pub max_cycles: u64,
}

impl Default for EnumLimits {
    fn default() -> Self {
        Self { max_paths: 10_000_000, max_cycles: 1_000_000 }
    }
}

impl EnumLimits {
    pub const UNLIMITED: EnumLimits = EnumLimits { max_paths: u64::MAX, max_cycles: u64::MAX };
}

/// A chord-free cycle in canonical form: the first vertex is the minimum of
/// the cycle and the second is smaller than the last, so each geometric
/// cycle has exactly one representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    vertices: Vec<Vertex>,
}

impl Cycle {
    /// Wraps a vertex sequence after checking it is in canonical form with
    /// at least three pairwise-distinct vertices. Edge membership is checked
    /// by consumers that hold the graph.
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, CycleError> {
        if vertices.len() < 3 {
            return Err(CycleError::MalformedCycle("fewer than 3 vertices".into()));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vertices.len() {
            return Err(CycleError::MalformedCycle("repeated vertex".into()));
        }
        if vertices[0] != sorted[0] {
            return Err(CycleError::MalformedCycle("must start at minimum vertex".into()));
        }
        if vertices[1] > *vertices.last().unwrap() {
            return Err(CycleError::MalformedCycle("second vertex must be below last".into()));
        }
        Ok(Self { vertices })
    }

    fn from_enumeration(vertices: Vec<Vertex>) -> Self {
        debug_assert!(Cycle::new(vertices.clone()).is_ok());
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Consecutive vertex pairs in traversal order, closing pair last.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |p| (self.vertices[p], self.vertices[(p + 1) % k]))
    }
}

/// One level of the breadth-first expansion: all extensible chord-free
/// paths with `k` vertices, stored as arena ranges.
struct PathFrontier {
    k: usize,
    /// Arena indices of this level's paths.
    range: std::ops::Range<usize>,
}

/// Arena node: a path is its last vertex plus a pointer to its prefix.
#[derive(Clone, Copy)]
struct PathNode {
    parent: u32,
    vertex: Vertex,
}

const NO_PARENT: u32 = u32::MAX;

/// Vertex-pair adjacency matrix for O(1) chord tests.
struct AdjMatrix {
    n: usize,
    bits: Vec<u64>,
}

impl AdjMatrix {
    fn new(g: &RelationGraph) -> Self {
        let n = g.vertex_count() as usize + 1;
        let mut bits = vec![0u64; (n * n + 63) / 64];
        for e in g.edges() {
            for (a, b) in [(e.i, e.j), (e.j, e.i)] {
                let idx = a as usize * n + b as usize;
                bits[idx / 64] |= 1 << (idx % 64);
            }
        }
        Self { n, bits }
    }

    #[inline]
    fn has(&self, a: Vertex, b: Vertex) -> bool {
        let idx = a as usize * self.n + b as usize;
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }
}

/// Enumerates every chord-free cycle of `g`, one canonical [`Cycle`] per
/// geometric cycle, grouped by increasing length.
pub fn enumerate_chord_free_cycles(
    g: &RelationGraph,
    limits: &EnumLimits,
) -> Result<Vec<Cycle>, CycleError> {
    let n = g.vertex_count();
    let adj = AdjMatrix::new(g);
    let mut arena: Vec<PathNode> = Vec::new();
    let mut cycles: Vec<Cycle> = Vec::new();
    let mut paths_created: u64 = 0;
    let mut scratch: Vec<Vertex> = Vec::new();

    let over = |cycles: &Vec<Cycle>, paths_created: u64| CycleError::LimitExceeded {
        cycles_found: cycles.len() as u64,
        paths_created,
    };

    for v in 1..=n {
        arena.push(PathNode { parent: NO_PARENT, vertex: v });
    }
    paths_created += n as u64;
    if paths_created > limits.max_paths {
        return Err(over(&cycles, paths_created));
    }
    let mut frontier = PathFrontier { k: 1, range: 0..arena.len() };

    while !frontier.range.is_empty() {
        let next_start = arena.len();
        for idx in frontier.range.clone() {
            // Materialize the path once; extensions only inspect it.
            scratch.clear();
            let mut at = idx as u32;
            while at != NO_PARENT {
                scratch.push(arena[at as usize].vertex);
                at = arena[at as usize].parent;
            }
            scratch.reverse();
            let k = scratch.len();
            debug_assert_eq!(k, frontier.k);
            let first = scratch[0];
            let last = scratch[k - 1];

            'next_edge: for (w, _) in g.neighbors(last) {
                // Cycles are seeded at their minimum vertex only.
                if w <= first {
                    continue;
                }
                // Cyclic: the extension revisits a path vertex.
                if scratch[1..].contains(&w) {
                    continue;
                }
                // Chorded: an edge from the new vertex to a middle vertex.
                for &mid in &scratch[1..k - 1] {
                    if adj.has(w, mid) {
                        continue 'next_edge;
                    }
                }
                // Terminal: an edge back to the first vertex closes a cycle.
                if k >= 2 && adj.has(w, first) {
                    if scratch[1] < w {
                        if cycles.len() as u64 >= limits.max_cycles {
                            return Err(over(&cycles, paths_created));
                        }
                        let mut vs = scratch.clone();
                        vs.push(w);
                        cycles.push(Cycle::from_enumeration(vs));
                    }
                    continue;
                }
                paths_created += 1;
                if paths_created > limits.max_paths {
                    return Err(over(&cycles, paths_created));
                }
                arena.push(PathNode { parent: idx as u32, vertex: w });
            }
        }
        if next_start == arena.len() {
            break;
        }
        frontier = PathFrontier { k: frontier.k + 1, range: next_start..arena.len() };
    }
    Ok(cycles)
}

/// Summary statistics of an enumerated cycle set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleStats {
    pub count: u64,
    /// Sum of cycle lengths; equals the clause count of the direct encoding.
    pub total_length: u64,
    pub max_length: u64,
}

pub fn cycle_stats(cycles: &[Cycle]) -> CycleStats {
    let mut stats = CycleStats { count: 0, total_length: 0, max_length: 0 };
    for c in cycles {
        stats.count += 1;
        stats.total_length += c.len() as u64;
        stats.max_length = stats.max_length.max(c.len() as u64);
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqgraph::RelationGraph;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn graph(n: u32, pairs: &[(u32, u32)]) -> RelationGraph {
        RelationGraph::build(
            n,
            pairs.iter().enumerate().map(|(k, &(i, j))| (i, j, k as u32 + 1)),
        )
        .unwrap()
    }

    fn complete(n: u32) -> RelationGraph {
        let mut pairs = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                pairs.push((i, j));
            }
        }
        graph(n, &pairs)
    }

    /// Independent oracle: depth-first enumeration of all simple cycles in
    /// canonical form, then a chord filter over every vertex pair.
    fn brute_force_chord_free(g: &RelationGraph) -> BTreeSet<Vec<u32>> {
        let n = g.vertex_count();
        let mut found = BTreeSet::new();
        let mut path: Vec<u32> = Vec::new();
        fn dfs(g: &RelationGraph, start: u32, path: &mut Vec<u32>, found: &mut BTreeSet<Vec<u32>>) {
            let last = *path.last().unwrap();
            for (w, _) in g.neighbors(last) {
                if w == start && path.len() >= 3 {
                    if path[1] < last && is_chord_free(g, path) {
                        found.insert(path.clone());
                    }
                } else if w > start && !path.contains(&w) {
                    path.push(w);
                    dfs(g, start, path, found);
                    path.pop();
                }
            }
        }
        fn is_chord_free(g: &RelationGraph, cycle: &[u32]) -> bool {
            let k = cycle.len();
            for p in 0..k {
                for q in p + 2..k {
                    if p == 0 && q == k - 1 {
                        continue;
                    }
                    if g.has_edge(cycle[p], cycle[q]) {
                        return false;
                    }
                }
            }
            true
        }
        for s in 1..=n {
            path.clear();
            path.push(s);
            dfs(g, s, &mut path, &mut found);
        }
        found
    }

    #[test]
    fn triangle_has_one_cycle() {
        let cycles = enumerate_chord_free_cycles(&complete(3), &EnumLimits::default()).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].vertices(), &[1, 2, 3]);
        assert_eq!(cycle_stats(&cycles), CycleStats { count: 1, total_length: 3, max_length: 3 });
    }

    #[test]
    fn complete_graphs_yield_only_triangles() {
        for n in 3..=6u32 {
            let cycles = enumerate_chord_free_cycles(&complete(n), &EnumLimits::default()).unwrap();
            let expected = (n * (n - 1) * (n - 2) / 6) as usize;
            assert_eq!(cycles.len(), expected, "K{n}");
            assert!(cycles.iter().all(|c| c.len() == 3));
        }
    }

    #[test]
    fn square_is_a_single_chord_free_cycle() {
        let g = graph(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]);
        let cycles = enumerate_chord_free_cycles(&g, &EnumLimits::default()).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].vertices(), &[1, 2, 4, 3]);
    }

    #[test]
    fn chorded_square_splits_into_triangles() {
        let g = graph(4, &[(1, 2), (2, 3), (3, 4), (1, 4), (1, 3)]);
        let cycles = enumerate_chord_free_cycles(&g, &EnumLimits::default()).unwrap();
        let sets: BTreeSet<_> = cycles.iter().map(|c| c.vertices().to_vec()).collect();
        assert_eq!(sets, BTreeSet::from([vec![1, 2, 3], vec![1, 3, 4]]));
    }

    #[test]
    fn empty_stats() {
        assert_eq!(cycle_stats(&[]), CycleStats { count: 0, total_length: 0, max_length: 0 });
    }

    #[test]
    fn cycle_limit_reports_partial_progress() {
        let err = enumerate_chord_free_cycles(
            &complete(6),
            &EnumLimits { max_paths: u64::MAX, max_cycles: 3 },
        )
        .unwrap_err();
        match err {
            CycleError::LimitExceeded { cycles_found, .. } => assert_eq!(cycles_found, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn path_limit_triggers() {
        let err = enumerate_chord_free_cycles(
            &complete(6),
            &EnumLimits { max_paths: 4, max_cycles: u64::MAX },
        )
        .unwrap_err();
        assert!(matches!(err, CycleError::LimitExceeded { .. }));
    }

    #[test]
    fn canonical_form_is_validated() {
        assert!(Cycle::new(vec![1, 2, 3]).is_ok());
        assert!(Cycle::new(vec![2, 1, 3]).is_err());
        assert!(Cycle::new(vec![1, 3, 2]).is_err());
        assert!(Cycle::new(vec![1, 2]).is_err());
        assert!(Cycle::new(vec![1, 2, 2]).is_err());
    }

    #[test]
    fn matches_brute_force_on_fixed_graphs() {
        let samples = [
            graph(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (2, 5)]),
            graph(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6), (2, 6), (3, 6)]),
            graph(4, &[(1, 2), (3, 4)]),
            graph(1, &[]),
        ];
        for g in &samples {
            let got: BTreeSet<_> = enumerate_chord_free_cycles(g, &EnumLimits::default())
                .unwrap()
                .into_iter()
                .map(|c| c.vertices().to_vec())
                .collect();
            assert_eq!(got, brute_force_chord_free(g));
        }
    }

    proptest! {
        /// Enumeration agrees with the brute-force oracle on random graphs
        /// of at most 9 vertices and 14 edges.
        #[test]
        fn matches_brute_force(n in 3u32..=9, picks in proptest::collection::vec(0usize..1000, 0..=14)) {
            let mut all_pairs = Vec::new();
            for i in 1..=n {
                for j in i + 1..=n {
                    all_pairs.push((i, j));
                }
            }
            let mut chosen = BTreeSet::new();
            for p in picks {
                chosen.insert(all_pairs[p % all_pairs.len()]);
            }
            let g = graph(n, &chosen.iter().copied().collect::<Vec<_>>());
            let got: BTreeSet<_> = enumerate_chord_free_cycles(&g, &EnumLimits::default())
                .unwrap()
                .into_iter()
                .map(|c| c.vertices().to_vec())
                .collect();
            prop_assert_eq!(got, brute_force_chord_free(&g));
        }

        /// Every emitted cycle is canonical, and no two share a vertex set:
        /// a rotation or reflection of another emission would collide here,
        /// because a chord-free cycle is determined by its vertex set.
        #[test]
        fn canonical_forms_are_unique(n in 3u32..=8, picks in proptest::collection::vec(0usize..1000, 0..=12)) {
            let mut all_pairs = Vec::new();
            for i in 1..=n {
                for j in i + 1..=n {
                    all_pairs.push((i, j));
                }
            }
            let mut chosen = BTreeSet::new();
            for p in picks {
                chosen.insert(all_pairs[p % all_pairs.len()]);
            }
            let g = graph(n, &chosen.iter().copied().collect::<Vec<_>>());
            let cycles = enumerate_chord_free_cycles(&g, &EnumLimits::default()).unwrap();
            let mut seen = BTreeSet::new();
            for c in &cycles {
                prop_assert!(Cycle::new(c.vertices().to_vec()).is_ok());
                let mut key = c.vertices().to_vec();
                key.sort_unstable();
                prop_assert!(seen.insert(key));
            }
        }
    }
}
