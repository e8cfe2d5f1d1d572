//! Boolean satisfiability with transitivity constraints.
//!
//! A subset of the propositional variables in a CNF formula may encode a
//! symmetric, transitive binary relation over `N` elements: each relational
//! variable `e[i,j]` states whether the relation holds between `i` and `j`.
//! This crate builds the relation graph, generates the clauses that enforce
//! transitivity (by direct chord-free-cycle enumeration, by dense completion,
//! or by sparse chordal augmentation), solves the constrained problem with a
//! built-in SAT solver (eagerly or by counterexample-guided refinement), and
//! provides a reduced ordered BDD engine with support-reduction and
//! implicant-filtering flows.
//!
//! The usual pipeline is:
//!
//! 1. describe the relation as a [`cnfio::RelMap`] (or build a
//!    [`eqgraph::RelationGraph`] directly),
//! 2. generate constraint clauses with [`constraints::generate`],
//! 3. merge them with the problem clauses ([`cnfio::merge`]) and hand the
//!    result to [`solver::solve`], or skip the merge and use
//!    [`solver::solve_eager`] / [`solver::solve_lazy`],
//! 4. or stay on the BDD side with [`obdd::reduced_transitivity_check`].

pub mod chordal;
pub mod cnfio;
pub mod constraints;
pub mod cycles;
pub mod eqgraph;
pub mod generators;
pub mod obdd;
pub mod solver;

pub use chordal::ChordalAugmentation;
pub use cnfio::{ClauseSet, RelMap};
pub use constraints::{GenerationReport, Method};
pub use cycles::{Cycle, EnumLimits};
pub use eqgraph::{Assignment, RelationGraph, ViolationWitness};
pub use solver::{SolveResult, Status};

/// Vertex of a relation graph, named `1..=n`.
pub type Vertex = u32;

/// Propositional variable id; always positive.
pub type VarId = u32;

/// Signed DIMACS-style literal: `+v` for the variable, `-v` for its negation.
pub type Lit = i32;
