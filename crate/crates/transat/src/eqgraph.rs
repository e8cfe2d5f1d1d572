//! Relation graphs, assignments, and the transitivity-violation oracle.
//!
//! A [`RelationGraph`] has a vertex `i` for each element `1..=n` of the
//! underlying domain and an undirected edge `(i, j)` for each relational
//! variable `e[i,j]`. Labelling every edge with the value its variable takes
//! under an [`Assignment`] yields the labeled graph on which transitivity is
//! checked: an assignment violates transitivity exactly when some cycle of
//! the labeled graph carries exactly one 0-edge. [`find_violation`] decides
//! that condition and produces a [`ViolationWitness`] cycle when it fails.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::{VarId, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("variable {0} bound to more than one edge")]
    DuplicateVariable(VarId),
    #[error("variable id must be positive")]
    InvalidVariable,
    #[error("vertex pair ({0}, {1}) out of range for {2} vertices")]
    VertexOutOfRange(Vertex, Vertex, u32),
    #[error("variable {0} has no value in the assignment")]
    PartialAssignment(VarId),
    #[error("edge ({0}, {1}) of the base graph is missing from the extension")]
    NotASuperset(Vertex, Vertex),
    #[error("base assignment violates transitivity on cycle {0:?}")]
    InputViolatesTransitivity(Vec<Vertex>),
}

/// One undirected edge, stored canonically with `i < j`, bound to the
/// propositional variable that encodes the relation between `i` and `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub i: Vertex,
    pub j: Vertex,
    pub var: VarId,
}

/// Undirected graph over vertices `1..=n` with one variable per edge.
///
/// Immutable after construction; cheap to clone and safe to share across
/// threads.
#[derive(Debug, Clone)]
pub struct RelationGraph {
    n: u32,
    edges: Vec<Edge>,
    /// Edge indices sorted by `(i, j)`; the scan order of every operation
    /// that promises canonical results.
    canonical: Vec<usize>,
    /// `adj[v]` lists `(neighbor, edge index)` sorted by neighbor.
    adj: Vec<Vec<(Vertex, usize)>>,
    pair_index: HashMap<(Vertex, Vertex), usize>,
    var_index: HashMap<VarId, usize>,
}

impl RelationGraph {
    /// Builds a graph from `(i, j, var)` triples, canonicalizing each pair to
    /// `i < j`. Rejects self-loops, out-of-range vertices, duplicate pairs,
    /// and reused variable ids.
    pub fn build(
        n: u32,
        edge_list: impl IntoIterator<Item = (Vertex, Vertex, VarId)>,
    ) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        let mut pair_index = HashMap::new();
        let mut var_index = HashMap::new();
        for (a, b, var) in edge_list {
            if a == b || a == 0 || b == 0 || a > n || b > n {
                return Err(GraphError::VertexOutOfRange(a, b, n));
            }
            if var == 0 {
                return Err(GraphError::InvalidVariable);
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            let idx = edges.len();
            if pair_index.insert((i, j), idx).is_some() {
                return Err(GraphError::DuplicateEdge(i, j));
            }
            if var_index.insert(var, idx).is_some() {
                return Err(GraphError::DuplicateVariable(var));
            }
            edges.push(Edge { i, j, var });
        }
        let mut adj = vec![Vec::new(); n as usize + 1];
        for (idx, e) in edges.iter().enumerate() {
            adj[e.i as usize].push((e.j, idx));
            adj[e.j as usize].push((e.i, idx));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut canonical: Vec<usize> = (0..edges.len()).collect();
        canonical.sort_unstable_by_key(|&idx| (edges[idx].i, edges[idx].j));
        Ok(Self { n, edges, canonical, adj, pair_index, var_index })
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges sorted by `(i, j)`.
    pub fn edges_canonical(&self) -> impl Iterator<Item = &Edge> {
        self.canonical.iter().map(|&idx| &self.edges[idx])
    }

    /// The edge between `a` and `b`, if present (order-insensitive).
    pub fn edge_between(&self, a: Vertex, b: Vertex) -> Option<&Edge> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.pair_index.get(&key).map(|&idx| &self.edges[idx])
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.edge_between(a, b).is_some()
    }

    pub fn edge_for_var(&self, var: VarId) -> Option<&Edge> {
        self.var_index.get(&var).map(|&idx| &self.edges[idx])
    }

    /// `(neighbor, edge)` pairs of `v`, sorted by neighbor.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, &Edge)> {
        self.adj[v as usize].iter().map(move |&(w, idx)| (w, &self.edges[idx]))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    /// Largest variable id bound to an edge, or 0 for an edgeless graph.
    pub fn max_var(&self) -> VarId {
        self.edges.iter().map(|e| e.var).max().unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.edges.iter().map(|e| e.var)
    }
}

/// Map from variable ids to Boolean values, total or partial.
///
/// A total assignment promises a value for every variable a consumer asks
/// about; operations that need totality report [`GraphError::PartialAssignment`]
/// when the promise is broken.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    values: BTreeMap<VarId, bool>,
    total: bool,
}

impl Assignment {
    pub fn total(pairs: impl IntoIterator<Item = (VarId, bool)>) -> Self {
        Self { values: pairs.into_iter().collect(), total: true }
    }

    pub fn partial(pairs: impl IntoIterator<Item = (VarId, bool)>) -> Self {
        Self { values: pairs.into_iter().collect(), total: false }
    }

    pub fn is_total(&self) -> bool {
        self.total
    }

    pub fn get(&self, var: VarId) -> Option<bool> {
        self.values.get(&var).copied()
    }

    pub fn set(&mut self, var: VarId, value: bool) {
        self.values.insert(var, value);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entries in increasing variable order.
    pub fn iter(&self) -> impl Iterator<Item = (VarId, bool)> + '_ {
        self.values.iter().map(|(&v, &b)| (v, b))
    }

    /// Copy of the entries whose variable satisfies `keep`, preserving the
    /// totality flag only when `keep` is the identity on the original domain.
    pub fn restrict(&self, keep: impl Fn(VarId) -> bool) -> Assignment {
        Assignment {
            values: self.values.iter().filter(|(&v, _)| keep(v)).map(|(&v, &b)| (v, b)).collect(),
            total: false,
        }
    }
}

impl FromIterator<(VarId, bool)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (VarId, bool)>>(iter: T) -> Self {
        Assignment::partial(iter)
    }
}

/// A cycle of the labeled graph carrying exactly one 0-edge.
///
/// `cycle` walks from one endpoint of the 0-edge to the other along 1-edges;
/// the closing `zero_edge` is `(cycle.first(), cycle.last())` in canonical
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationWitness {
    pub cycle: Vec<Vertex>,
    pub zero_edge: (Vertex, Vertex),
}

impl ViolationWitness {
    /// Re-checks this witness against a graph and assignment: every
    /// consecutive pair (and the closing pair) must be an edge, and exactly
    /// one cycle edge must be assigned 0.
    pub fn verify(&self, g: &RelationGraph, assignment: &Assignment) -> bool {
        let k = self.cycle.len();
        if k < 3 {
            return false;
        }
        let mut zeros = 0;
        for p in 0..k {
            let a = self.cycle[p];
            let b = self.cycle[(p + 1) % k];
            match g.edge_between(a, b) {
                Some(e) => match assignment.get(e.var) {
                    Some(true) => {}
                    Some(false) => zeros += 1,
                    None => return false,
                },
                None => return false,
            }
        }
        let (zi, zj) = self.zero_edge;
        zeros == 1
            && g.edge_between(zi, zj)
                .is_some_and(|e| assignment.get(e.var) == Some(false))
    }
}

/// Union-find with path halving and union by size.
struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }

    fn connected(&mut self, a: u32, b: u32) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Decides whether `assignment` (total over `g`'s variables) violates
/// transitivity, returning a witness cycle when it does.
///
/// A violation exists exactly when some 0-edge `(i, j)` has its endpoints
/// joined by a path of 1-edges; the witness closes that path with the
/// 0-edge. Deterministic: 0-edges are scanned in canonical `(i, j)` order
/// and the 1-path is the breadth-first shortest one, neighbors visited in
/// increasing vertex order.
pub fn find_violation(
    g: &RelationGraph,
    assignment: &Assignment,
) -> Result<Option<ViolationWitness>, GraphError> {
    for e in g.edges() {
        if assignment.get(e.var).is_none() {
            return Err(GraphError::PartialAssignment(e.var));
        }
    }
    Ok(violation_with(g, |var| assignment.get(var)))
}

/// [`find_violation`] over a partial labeling: edges without a value are
/// treated as absent. Only cycles whose edges are all labeled can witness a
/// violation, so a partial labeling is consistent iff every completion that
/// keeps its values can be made consistent.
pub fn find_violation_partial(g: &RelationGraph, assignment: &Assignment) -> Option<ViolationWitness> {
    violation_with(g, |var| assignment.get(var))
}

fn violation_with(
    g: &RelationGraph,
    value: impl Fn(VarId) -> Option<bool>,
) -> Option<ViolationWitness> {
    let n = g.vertex_count() as usize;
    let mut sets = DisjointSets::new(n + 1);
    for e in g.edges() {
        if value(e.var) == Some(true) {
            sets.union(e.i, e.j);
        }
    }
    for e in g.edges_canonical() {
        if value(e.var) == Some(false) && sets.connected(e.i, e.j) {
            let cycle = shortest_one_path(g, e.i, e.j, &value)
                .expect("connected endpoints must admit a 1-path");
            return Some(ViolationWitness { cycle, zero_edge: (e.i, e.j) });
        }
    }
    None
}

/// Breadth-first shortest path from `from` to `to` using only 1-edges.
fn shortest_one_path(
    g: &RelationGraph,
    from: Vertex,
    to: Vertex,
    value: &impl Fn(VarId) -> Option<bool>,
) -> Option<Vec<Vertex>> {
    let n = g.vertex_count() as usize;
    let mut parent: Vec<Option<Vertex>> = vec![None; n + 1];
    let mut queue = std::collections::VecDeque::new();
    parent[from as usize] = Some(from);
    queue.push_back(from);
    'search: while let Some(v) = queue.pop_front() {
        for (w, e) in g.neighbors(v) {
            if value(e.var) == Some(true) && parent[w as usize].is_none() {
                parent[w as usize] = Some(v);
                if w == to {
                    break 'search;
                }
                queue.push_back(w);
            }
        }
    }
    parent[to as usize]?;
    let mut path = vec![to];
    let mut v = to;
    while v != from {
        v = parent[v as usize].unwrap();
        path.push(v);
    }
    path.reverse();
    Some(path)
}

/// Extends a transitivity-consistent assignment over `g1` to one over the
/// edge-superset graph `g2` without introducing a violation.
///
/// Fresh edges are processed in canonical `(i, j)` order; each new variable
/// is set to 1 exactly when its endpoints are already joined by a path of
/// 1-edges in the graph labeled so far, and the new label is visible to
/// later connectivity queries. Values on `g1`'s variables are preserved.
pub fn extend_assignment(
    g1: &RelationGraph,
    base: &Assignment,
    g2: &RelationGraph,
) -> Result<Assignment, GraphError> {
    for e in g1.edges() {
        match g2.edge_between(e.i, e.j) {
            Some(e2) if e2.var == e.var => {}
            _ => return Err(GraphError::NotASuperset(e.i, e.j)),
        }
    }
    if let Some(witness) = find_violation(g1, base)? {
        return Err(GraphError::InputViolatesTransitivity(witness.cycle));
    }

    let mut result = BTreeMap::new();
    let n = g2.vertex_count() as usize;
    let mut sets = DisjointSets::new(n + 1);
    for e in g1.edges() {
        let v = base.get(e.var).unwrap();
        result.insert(e.var, v);
        if v {
            sets.union(e.i, e.j);
        }
    }
    for e in g2.edges_canonical() {
        if g1.edge_between(e.i, e.j).is_some() {
            continue;
        }
        let connected = sets.connected(e.i, e.j);
        result.insert(e.var, connected);
        if connected {
            sets.union(e.i, e.j);
        }
    }
    Ok(Assignment { values: result, total: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> RelationGraph {
        RelationGraph::build(3, [(1, 2, 1), (2, 3, 2), (1, 3, 3)]).unwrap()
    }

    #[test]
    fn build_canonicalizes_and_indexes() {
        let g = RelationGraph::build(3, [(2, 1, 7), (3, 2, 9)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        let e = g.edge_between(1, 2).unwrap();
        assert_eq!((e.i, e.j, e.var), (1, 2, 7));
        assert!(g.has_edge(2, 3));
        assert!(!g.has_edge(1, 3));
        assert_eq!(g.edge_for_var(9).unwrap().j, 3);
    }

    #[test]
    fn build_rejects_duplicate_edge() {
        let err = RelationGraph::build(3, [(1, 2, 1), (2, 1, 2)]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge(1, 2));
    }

    #[test]
    fn build_rejects_duplicate_variable() {
        let err = RelationGraph::build(3, [(1, 2, 1), (2, 3, 1)]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateVariable(1));
    }

    #[test]
    fn build_rejects_out_of_range_and_self_loops() {
        let err = RelationGraph::build(4, [(1, 5, 1)]).unwrap_err();
        assert_eq!(err, GraphError::VertexOutOfRange(1, 5, 4));
        let err = RelationGraph::build(4, [(2, 2, 1)]).unwrap_err();
        assert_eq!(err, GraphError::VertexOutOfRange(2, 2, 4));
    }

    #[test]
    fn violation_on_triangle() {
        let g = k3();
        let a = Assignment::total([(1, true), (2, true), (3, false)]);
        let w = find_violation(&g, &a).unwrap().unwrap();
        assert_eq!(w.cycle, vec![1, 2, 3]);
        assert_eq!(w.zero_edge, (1, 3));
        assert!(w.verify(&g, &a));
    }

    #[test]
    fn all_ones_is_consistent() {
        let g = k3();
        let a = Assignment::total([(1, true), (2, true), (3, true)]);
        assert_eq!(find_violation(&g, &a).unwrap(), None);
    }

    #[test]
    fn partial_assignment_is_rejected() {
        let g = k3();
        let a = Assignment::partial([(1, true), (2, true)]);
        assert_eq!(find_violation(&g, &a).unwrap_err(), GraphError::PartialAssignment(3));
    }

    /// The 4-cycle has a single (chord-free) cycle, so an assignment violates
    /// exactly when one of the four edges is 0. Checked over all 16.
    #[test]
    fn four_cycle_exhaustive() {
        let g = RelationGraph::build(4, [(1, 2, 1), (2, 3, 2), (3, 4, 3), (1, 4, 4)]).unwrap();
        for bits in 0u32..16 {
            let a = Assignment::total((1..=4).map(|v| (v, bits >> (v - 1) & 1 == 1)));
            let zeros = (0..4).filter(|b| bits >> b & 1 == 0).count();
            let witness = find_violation(&g, &a).unwrap();
            assert_eq!(witness.is_some(), zeros == 1, "bits {bits:04b}");
            if let Some(w) = witness {
                assert_eq!(w.cycle.len(), 4);
                assert!(w.verify(&g, &a));
            }
        }
    }

    #[test]
    fn partial_labeling_oracle() {
        let g = k3();
        // 0-edge (1,3) with both 1-edges labeled: violation even partially.
        let a = Assignment::partial([(1, true), (2, true), (3, false)]);
        assert!(find_violation_partial(&g, &a).is_some());
        // Same 0-edge with one leg unlabeled: no fully labeled cycle.
        let a = Assignment::partial([(1, true), (3, false)]);
        assert!(find_violation_partial(&g, &a).is_none());
    }

    #[test]
    fn extend_adds_one_for_connected_endpoints() {
        let g1 = RelationGraph::build(3, [(1, 2, 1), (2, 3, 2)]).unwrap();
        let g2 = k3();
        let base = Assignment::total([(1, true), (2, true)]);
        let ext = extend_assignment(&g1, &base, &g2).unwrap();
        assert_eq!(ext.get(3), Some(true));
        assert_eq!(find_violation(&g2, &ext).unwrap(), None);
    }

    #[test]
    fn extend_adds_zero_when_disconnected() {
        let g1 = RelationGraph::build(3, [(1, 2, 1)]).unwrap();
        let g2 = RelationGraph::build(3, [(1, 2, 1), (1, 3, 3)]).unwrap();
        let base = Assignment::total([(1, true)]);
        let ext = extend_assignment(&g1, &base, &g2).unwrap();
        assert_eq!(ext.get(3), Some(false));
    }

    #[test]
    fn extend_across_zero_edge_stays_consistent() {
        let g1 = RelationGraph::build(3, [(1, 2, 1), (2, 3, 2)]).unwrap();
        let g2 = k3();
        let base = Assignment::total([(1, true), (2, false)]);
        let ext = extend_assignment(&g1, &base, &g2).unwrap();
        assert_eq!(ext.get(3), Some(false));
        assert_eq!(find_violation(&g2, &ext).unwrap(), None);
    }

    #[test]
    fn extend_with_same_graph_is_identity() {
        let g = k3();
        let base = Assignment::total([(1, true), (2, true), (3, true)]);
        let ext = extend_assignment(&g, &base, &g).unwrap();
        assert_eq!(ext, base);
    }

    #[test]
    fn extend_rejects_non_superset_and_violating_base() {
        let g1 = k3();
        let g2 = RelationGraph::build(3, [(1, 2, 1), (2, 3, 2)]).unwrap();
        let base = Assignment::total([(1, true), (2, true), (3, true)]);
        assert!(matches!(
            extend_assignment(&g1, &base, &g2).unwrap_err(),
            GraphError::NotASuperset(1, 3)
        ));
        let bad = Assignment::total([(1, true), (2, true), (3, false)]);
        assert!(matches!(
            extend_assignment(&g1, &bad, &g1).unwrap_err(),
            GraphError::InputViolatesTransitivity(_)
        ));
    }
}
