//! Exact algorithms for diameter reduction via arc reversal.
//!
//! Given a digraph, a target diameter `d`, and a reversal budget `k`, the
//! crate decides whether at most `k` arc reversals (counted by cardinality or
//! by total arc weight) suffice to bring the diameter down to `d`, and
//! produces a witness reversal set when they do. It ships:
//!
//! * a directed multigraph core with exact distances and cactus
//!   decomposition ([`digraph`], [`cactus`]);
//! * a branch-and-bound solver plus an exhaustive `2^m` oracle ([`solver`]);
//! * a polynomial-time dynamic program for cactus digraphs
//!   ([`cactus_solver`]);
//! * generators for dominating-set and subset-sum reduction instances with
//!   solution extraction ([`reductions`]);
//! * directed edge polytopes with exact lattice-normalized volumes
//!   ([`polytope`]).

pub mod cactus;
pub mod cactus_solver;
pub mod digraph;
pub mod io;
pub mod polytope;
pub mod reductions;
pub mod solver;

pub use cactus::{cactus_decompose, CactusDecomposition, Cycle, CycleTree};
pub use cactus_solver::{cycle_costs, solve_cactus, CycleOrientationCost};
pub use digraph::{Arc, Digraph, ExtendedDistance, GraphError, ReversalSet};
pub use solver::{
    oracle_min_reversals, solve_k_reversals, CostMode, SolveBudget, SolveError, SolveOutcome,
    Solution, SolverOptions,
};
