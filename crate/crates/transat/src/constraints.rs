//! Transitivity constraint clauses and the three generation methods.
//!
//! A length-`k` cycle induces `k` clauses: each one states that if all but
//! one edge of the cycle hold, the remaining edge holds too. Conjoining the
//! clauses of every chord-free cycle yields a formula an assignment
//! satisfies exactly when it is transitivity-consistent.
//!
//! The three ways to pick the cycle set are:
//!
//! * **direct** — enumerate the chord-free cycles of the graph as-is; no new
//!   variables, but possibly exponentially many cycles;
//! * **dense** — complete the graph, introducing a variable for every absent
//!   vertex pair; only triangles remain, `N(N-1)(N-2)/2` clauses total;
//! * **sparse** — add fill edges until the graph is chordal, then emit the
//!   triangle constraints of the augmentation; never more clauses than
//!   dense, usually far fewer.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::chordal::{make_chordal, ChordalError};
use crate::cycles::{cycle_stats, enumerate_chord_free_cycles, Cycle, CycleError, EnumLimits};
use crate::eqgraph::{Assignment, RelationGraph};
use crate::{Lit, VarId, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("enumeration limit exceeded: {cycles_found} cycles, {paths_created} paths at cut-off")]
    LimitExceeded { cycles_found: u64, paths_created: u64 },
    #[error("fresh variable base {base} does not exceed the largest bound id {max_var}")]
    VarBaseTooLow { base: VarId, max_var: VarId },
    #[error("cycle edge ({0}, {1}) is not in the graph")]
    EdgeMissing(Vertex, Vertex),
    #[error("not a valid cycle: {0}")]
    MalformedCycle(String),
}

impl From<CycleError> for GenError {
    fn from(e: CycleError) -> Self {
        match e {
            CycleError::LimitExceeded { cycles_found, paths_created } => {
                GenError::LimitExceeded { cycles_found, paths_created }
            }
            CycleError::MalformedCycle(msg) => GenError::MalformedCycle(msg),
        }
    }
}

impl From<ChordalError> for GenError {
    fn from(e: ChordalError) -> Self {
        match e {
            ChordalError::VarBaseTooLow { base, max_var } => {
                GenError::VarBaseTooLow { base, max_var }
            }
        }
    }
}

/// CNF formula: positive literals name variables, negative their negations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClauseSet {
    /// Highest variable id; literals stay within `-num_vars..=num_vars`.
    pub num_vars: VarId,
    pub clauses: Vec<Vec<Lit>>,
}

impl ClauseSet {
    pub fn new(num_vars: VarId) -> Self {
        Self { num_vars, clauses: Vec::new() }
    }

    pub fn push(&mut self, clause: Vec<Lit>) {
        debug_assert!(!clause.is_empty());
        debug_assert!(clause.iter().all(|&l| l != 0 && l.unsigned_abs() <= self.num_vars));
        self.clauses.push(clause);
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// True when every clause has a literal made true by the assignment.
    /// Unassigned variables satisfy nothing, so a partial assignment is
    /// judged pessimistically.
    pub fn satisfied_by(&self, assignment: &Assignment) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                assignment.get(lit.unsigned_abs()).is_some_and(|v| v == (lit > 0))
            })
        })
    }
}

/// Constraint generation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Dense,
    Sparse,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Dense => "dense",
            Method::Sparse => "sparse",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(Method::Direct),
            "dense" => Ok(Method::Dense),
            "sparse" => Ok(Method::Sparse),
            other => Err(format!("unknown method `{other}` (expected direct|dense|sparse)")),
        }
    }
}

/// What a generation run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationReport {
    pub method: Method,
    /// Edge count of the graph the constraints were emitted for (after any
    /// completion or augmentation).
    pub edges: u64,
    /// Cycles used: chord-free cycles for direct, triangles otherwise.
    pub cycles: u64,
    pub clauses: u64,
    /// Fresh variables introduced for absent pairs or fill edges.
    pub fill_vars: Vec<(VarId, Vertex, Vertex)>,
}

/// The `k` clauses of a length-`k` cycle.
///
/// Clause `t` is the implication "all edges but `t` force edge `t`", written
/// as a disjunction: the other `k-1` edge variables negated in traversal
/// order starting after `t`'s predecessor, then edge `t`'s variable positive.
pub fn clauses_for_cycle(cycle: &Cycle, g: &RelationGraph) -> Result<Vec<Vec<Lit>>, GenError> {
    let vs = cycle.vertices();
    let k = vs.len();
    let mut vars = Vec::with_capacity(k);
    for (a, b) in cycle.edges() {
        let edge = g.edge_between(a, b).ok_or(GenError::EdgeMissing(a.min(b), a.max(b)))?;
        vars.push(edge.var);
    }
    let mut clauses = Vec::with_capacity(k);
    for t in 0..k {
        let mut clause = Vec::with_capacity(k);
        for off in 0..k - 1 {
            clause.push(-(vars[(t + off) % k] as Lit));
        }
        clause.push(vars[(t + k - 1) % k] as Lit);
        clauses.push(clause);
    }
    Ok(clauses)
}

/// Generates the transitivity constraint formula for `g` with the chosen
/// method. `fresh_var_base` numbers the variables dense or sparse introduce;
/// it must exceed every id already bound in `g` (ignored by direct).
pub fn generate(
    g: &RelationGraph,
    method: Method,
    fresh_var_base: VarId,
    limits: &EnumLimits,
) -> Result<(ClauseSet, GenerationReport), GenError> {
    match method {
        Method::Direct => {
            let cycles = enumerate_chord_free_cycles(g, limits)?;
            let stats = cycle_stats(&cycles);
            let mut cs = ClauseSet::new(g.max_var());
            for c in &cycles {
                for clause in clauses_for_cycle(c, g)? {
                    cs.push(clause);
                }
            }
            let report = GenerationReport {
                method,
                edges: g.edge_count() as u64,
                cycles: stats.count,
                clauses: cs.len() as u64,
                fill_vars: Vec::new(),
            };
            Ok((cs, report))
        }
        Method::Dense => {
            let max_var = g.max_var();
            if fresh_var_base <= max_var {
                return Err(GenError::VarBaseTooLow { base: fresh_var_base, max_var });
            }
            let n = g.vertex_count();
            let mut fill_vars = Vec::new();
            let mut next_var = fresh_var_base;
            let mut edges: Vec<(Vertex, Vertex, VarId)> =
                g.edges().iter().map(|e| (e.i, e.j, e.var)).collect();
            for i in 1..=n {
                for j in i + 1..=n {
                    if g.edge_between(i, j).is_none() {
                        edges.push((i, j, next_var));
                        fill_vars.push((next_var, i, j));
                        next_var += 1;
                    }
                }
            }
            let complete =
                RelationGraph::build(n, edges).expect("completion of a valid graph is valid");
            let mut cs = ClauseSet::new(max_var.max(next_var.saturating_sub(1)));
            let mut cycles = 0u64;
            for i in 1..=n {
                for j in i + 1..=n {
                    for k in j + 1..=n {
                        let triangle = Cycle::new(vec![i, j, k]).expect("triple is canonical");
                        for clause in clauses_for_cycle(&triangle, &complete)? {
                            cs.push(clause);
                        }
                        cycles += 1;
                    }
                }
            }
            let report = GenerationReport {
                method,
                edges: complete.edge_count() as u64,
                cycles,
                clauses: cs.len() as u64,
                fill_vars,
            };
            Ok((cs, report))
        }
        Method::Sparse => {
            let aug = make_chordal(g, fresh_var_base)?;
            let cycles = enumerate_chord_free_cycles(&aug.graph, limits)?;
            debug_assert!(cycles.iter().all(|c| c.len() == 3));
            let stats = cycle_stats(&cycles);
            let top_fill = aug.fill_edges.iter().map(|e| e.var).max().unwrap_or(0);
            let mut cs = ClauseSet::new(g.max_var().max(top_fill));
            for c in &cycles {
                for clause in clauses_for_cycle(c, &aug.graph)? {
                    cs.push(clause);
                }
            }
            let report = GenerationReport {
                method,
                edges: aug.graph.edge_count() as u64,
                cycles: stats.count,
                clauses: cs.len() as u64,
                fill_vars: aug.fill_edges.iter().map(|e| (e.var, e.i, e.j)).collect(),
            };
            Ok((cs, report))
        }
    }
}
