//! Chordal augmentation by elimination, and a chordality check.
//!
//! A graph is chordal when every cycle longer than three has a chord, which
//! confines its chord-free cycles to triangles. [`make_chordal`] adds the
//! fill edges produced by a minimum-degree elimination game, the classic
//! fill-reducing heuristic from sparse Gaussian elimination; finding a
//! minimum fill is NP-complete, so no optimality is claimed.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::eqgraph::{Edge, RelationGraph};
use crate::{VarId, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChordalError {
    #[error("fresh variable base {base} does not exceed the largest bound id {max_var}")]
    VarBaseTooLow { base: VarId, max_var: VarId },
}

/// Result of chordalizing a graph: the augmented graph, the fill edges with
/// their fresh variable ids, and the elimination order that produced them.
#[derive(Debug, Clone)]
pub struct ChordalAugmentation {
    pub graph: RelationGraph,
    pub fill_edges: Vec<Edge>,
    pub elimination_order: Vec<Vertex>,
}

/// Adds fill edges until the graph is chordal.
///
/// Vertices are eliminated one at a time; eliminating `i` connects every
/// pair of its uneliminated neighbors that is not already adjacent. The
/// vertex choice at each step is: minimum degree in the current partially
/// eliminated graph, then fewest new edges added, then smallest index. Fill
/// edges are bound to `fresh_var_base, fresh_var_base + 1, ...` in creation
/// order, pairs sorted within an elimination step.
pub fn make_chordal(
    g: &RelationGraph,
    fresh_var_base: VarId,
) -> Result<ChordalAugmentation, ChordalError> {
    let max_var = g.max_var();
    if fresh_var_base <= max_var {
        return Err(ChordalError::VarBaseTooLow { base: fresh_var_base, max_var });
    }
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); n as usize + 1];
    for e in g.edges() {
        adj[e.i as usize].insert(e.j);
        adj[e.j as usize].insert(e.i);
    }
    let mut alive: Vec<bool> = vec![true; n as usize + 1];
    let mut fill_edges: Vec<Edge> = Vec::new();
    let mut elimination_order: Vec<Vertex> = Vec::with_capacity(n as usize);
    let mut next_var = fresh_var_base;

    let fill_needed = |adj: &Vec<BTreeSet<Vertex>>, v: Vertex| -> usize {
        let nbrs: Vec<Vertex> = adj[v as usize].iter().copied().collect();
        let mut missing = 0;
        for (a, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[a + 1..] {
                if !adj[x as usize].contains(&y) {
                    missing += 1;
                }
            }
        }
        missing
    };

    for _ in 0..n {
        let min_degree = (1..=n)
            .filter(|&v| alive[v as usize])
            .map(|v| adj[v as usize].len())
            .min()
            .unwrap();
        let pick = (1..=n)
            .filter(|&v| alive[v as usize] && adj[v as usize].len() == min_degree)
            .min_by_key(|&v| (fill_needed(&adj, v), v))
            .unwrap();

        let nbrs: Vec<Vertex> = adj[pick as usize].iter().copied().collect();
        for (a, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[a + 1..] {
                if adj[x as usize].insert(y) {
                    adj[y as usize].insert(x);
                    fill_edges.push(Edge { i: x.min(y), j: x.max(y), var: next_var });
                    next_var += 1;
                }
            }
        }
        for &w in &nbrs {
            adj[w as usize].remove(&pick);
        }
        adj[pick as usize].clear();
        alive[pick as usize] = false;
        elimination_order.push(pick);
    }

    let augmented = RelationGraph::build(
        n,
        g.edges()
            .iter()
            .chain(fill_edges.iter())
            .map(|e| (e.i, e.j, e.var)),
    )
    .expect("augmenting a valid graph with fresh fill edges cannot fail");
    debug_assert!(verify_chordal(&augmented));
    Ok(ChordalAugmentation { graph: augmented, fill_edges, elimination_order })
}

/// True iff the graph admits a perfect elimination ordering.
///
/// Runs maximum cardinality search (largest count of already-visited
/// neighbors first, smallest index on ties) and validates the reverse visit
/// order with the standard single-witness check: for each vertex, its
/// latest-visited earlier neighbor must cover all its other earlier
/// neighbors.
pub fn verify_chordal(g: &RelationGraph) -> bool {
    let n = g.vertex_count() as usize;
    if n == 0 {
        return true;
    }
    let mut pos = vec![usize::MAX; n + 1];
    let mut weight = vec![0usize; n + 1];
    let mut visit: Vec<Vertex> = Vec::with_capacity(n);
    for step in 0..n {
        let v = (1..=n as Vertex)
            .filter(|&v| pos[v as usize] == usize::MAX)
            .max_by_key(|&v| (weight[v as usize], std::cmp::Reverse(v)))
            .unwrap();
        pos[v as usize] = step;
        visit.push(v);
        for (w, _) in g.neighbors(v) {
            if pos[w as usize] == usize::MAX {
                weight[w as usize] += 1;
            }
        }
    }
    for &v in &visit {
        let earlier: Vec<Vertex> = g
            .neighbors(v)
            .map(|(w, _)| w)
            .filter(|&w| pos[w as usize] < pos[v as usize])
            .collect();
        let Some(&witness) = earlier.iter().max_by_key(|&&w| pos[w as usize]) else {
            continue;
        };
        for &w in &earlier {
            if w != witness && !g.has_edge(w, witness) {
                return false;
            }
        }
    }
    true
}
