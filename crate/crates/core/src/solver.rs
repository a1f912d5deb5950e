//! Exact decision/optimization for bounded arc reversal, plus an exhaustive
//! orientation oracle.
//!
//! `solve_k_reversals` finds a minimum-cost reversal set achieving diameter at
//! most `d` within the budget. Its answer is defined as if all reversal sets
//! were enumerated in order of increasing cardinality and then
//! lexicographically by sorted arc ids; internally the search branches on a
//! still-violating vertex pair and tries only arcs that lie on a short
//! undirected walk between that pair. This is sound and complete:
//!
//! * Any witness must create, for every currently violating pair `(u, v)`, a
//!   directed `u -> v` path of weight at most `d`. At least one arc on that
//!   path differs from the current orientation, and every arc of the path
//!   lies on an undirected `u`-`v` walk of weight at most `d`. Branching over
//!   those candidate arcs therefore reaches a subset of every witness.
//! * At the first cardinality level with any hit, every hit is itself a
//!   minimum witness, so the lexicographic tie-break over the collected hits
//!   equals the tie-break over all minimum witnesses.
//!
//! `oracle_min_reversals` ignores all of that and exhausts every one of the
//! `2^m` reversal subsets. It is the ground truth the rest of the crate is
//! tested against and is only usable for small arc counts.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::digraph::{Digraph, ExtendedDistance, GraphError, ReversalSet};

/// Default cap on the arc count accepted by the exhaustive oracle.
pub const DEFAULT_ORACLE_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("target diameter must be at least 2, got {d}")]
    InvalidTargetDiameter { d: u64 },
    #[error("instance has {arcs} arcs, above the exhaustive-oracle cap {cap}")]
    OracleCapExceeded { arcs: usize, cap: usize },
    #[error("input graph is not a cactus")]
    NotCactus,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Whether a reversal set is charged by cardinality or by total arc weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMode {
    Cardinality,
    Weight,
}

impl CostMode {
    pub fn arc_cost(self, graph: &Digraph, arc: usize) -> u64 {
        match self {
            CostMode::Cardinality => 1,
            CostMode::Weight => graph.arcs()[arc].weight,
        }
    }

    /// Cost of a set of arc ids in this mode.
    pub fn set_cost(self, graph: &Digraph, ids: &[usize]) -> u64 {
        ids.iter().map(|&i| self.arc_cost(graph, i)).sum()
    }
}

/// Target diameter `d`, reversal budget `k`, and the cost mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveBudget {
    pub target_diameter: u64,
    pub budget: u64,
    pub mode: CostMode,
}

impl SolveBudget {
    pub fn cardinality(target_diameter: u64, budget: u64) -> Self {
        SolveBudget { target_diameter, budget, mode: CostMode::Cardinality }
    }

    pub fn weight(target_diameter: u64, budget: u64) -> Self {
        SolveBudget { target_diameter, budget, mode: CostMode::Weight }
    }
}

/// A verified witness: the reversal set, the diameter it actually achieves,
/// and its cost in the requested mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub witness: ReversalSet,
    pub achieved_diameter: ExtendedDistance,
    pub cost: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Feasible(Solution),
    Infeasible,
}

impl SolveOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveOutcome::Feasible(_))
    }

    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SolveOutcome::Feasible(s) => Some(s),
            SolveOutcome::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Worker threads for the subset search; 0 uses the ambient rayon pool.
    /// The result is identical for every thread count.
    pub threads: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { threads: 0 }
    }
}

pub fn solve_k_reversals(graph: &Digraph, budget: &SolveBudget) -> Result<SolveOutcome, SolveError> {
    solve_k_reversals_with(graph, budget, &SolverOptions::default())
}

pub fn solve_k_reversals_with(
    graph: &Digraph,
    budget: &SolveBudget,
    options: &SolverOptions,
) -> Result<SolveOutcome, SolveError> {
    if budget.target_diameter < 2 {
        return Err(SolveError::InvalidTargetDiameter { d: budget.target_diameter });
    }
    let run = || solve_inner(graph, budget);
    if options.threads == 0 {
        run()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .expect("failed to build solver thread pool");
        pool.install(run)
    }
}

fn solve_inner(graph: &Digraph, budget: &SolveBudget) -> Result<SolveOutcome, SolveError> {
    let d = budget.target_diameter;
    let diam = graph.diameter();
    if diam <= ExtendedDistance::Finite(d) {
        // Already feasible inputs take the empty witness.
        return Ok(SolveOutcome::Feasible(Solution {
            witness: ReversalSet::empty(),
            achieved_diameter: diam,
            cost: 0,
        }));
    }
    // Reversals keep the underlying undirected graph. A disconnected one can
    // never become strongly connected, and neither can a bridged one (the
    // bridge stays one-directional under every orientation).
    if !graph.is_undirected_connected() || crate::cactus::has_undirected_bridge(graph) {
        return Ok(SolveOutcome::Infeasible);
    }

    let ctx = SearchCtx::new(graph, d, budget.mode);
    let best = match budget.mode {
        CostMode::Cardinality => {
            let max_level = budget.budget.min(graph.arc_count() as u64);
            let mut found = None;
            for level in 1..=max_level {
                let hits = ctx.explore(Limit::Cardinality(level));
                if let Some(best) = hits {
                    found = Some(best);
                    break;
                }
            }
            found
        }
        CostMode::Weight => ctx.explore(Limit::Weight(budget.budget)),
    };

    match best {
        None => Ok(SolveOutcome::Infeasible),
        Some((cost, ids)) => {
            let witness = ReversalSet::new(ids);
            let achieved = graph.reverse_arcs(&witness)?.diameter();
            debug_assert!(achieved <= ExtendedDistance::Finite(d));
            debug_assert_eq!(budget.mode.set_cost(graph, witness.ids()), cost);
            Ok(SolveOutcome::Feasible(Solution { witness, achieved_diameter: achieved, cost }))
        }
    }
}

#[derive(Clone, Copy)]
enum Limit {
    /// Explore sets of exactly this cardinality or fewer.
    Cardinality(u64),
    /// Explore sets of total weight at most this.
    Weight(u64),
}

/// A candidate hit: (cost, sorted arc ids). `Vec<usize>` ordering is
/// lexicographic, which is exactly the required tie-break.
type Hit = (u64, Vec<usize>);

fn better(a: Option<Hit>, b: Option<Hit>) -> Option<Hit> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(if (a.0, &a.1) <= (b.0, &b.1) { a } else { b }),
    }
}

struct SearchCtx<'a> {
    graph: &'a Digraph,
    d: u64,
    mode: CostMode,
    /// All-pairs distances in the underlying undirected graph; invariant
    /// under reversal, so computed once.
    undirected: Vec<Vec<ExtendedDistance>>,
    incumbent: AtomicU64,
}

impl<'a> SearchCtx<'a> {
    fn new(graph: &'a Digraph, d: u64, mode: CostMode) -> Self {
        let undirected = (0..graph.vertex_count())
            .map(|u| graph.undirected_distances_from(u))
            .collect();
        SearchCtx { graph, d, mode, undirected, incumbent: AtomicU64::new(u64::MAX) }
    }

    /// Arcs lying on an undirected `u`-`v` walk of weight at most `d`,
    /// excluding arcs already committed in `prefix`. Candidates depend only
    /// on the undirected structure, never on the current orientation.
    fn pair_candidates(&self, u: usize, v: usize, prefix: &[usize]) -> Vec<usize> {
        let du = &self.undirected[u];
        let dv = &self.undirected[v];
        self.graph
            .arcs()
            .iter()
            .enumerate()
            .filter(|(id, arc)| {
                if prefix.binary_search(id).is_ok() {
                    return false;
                }
                let a = du[arc.tail].add(ExtendedDistance::Finite(arc.weight)).add(dv[arc.head]);
                let b = du[arc.head].add(ExtendedDistance::Finite(arc.weight)).add(dv[arc.tail]);
                a.min(b) <= ExtendedDistance::Finite(self.d)
            })
            .map(|(id, _)| id)
            .collect()
    }

    fn violating_pairs(&self, oriented: &Digraph) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for u in 0..oriented.vertex_count() {
            let dist = oriented.distances_from(u);
            for (v, &dv) in dist.iter().enumerate() {
                if v != u && dv > ExtendedDistance::Finite(self.d) {
                    pairs.push((u, v));
                }
            }
        }
        pairs
    }

    /// Run the search under `limit`; returns the best hit if any.
    fn explore(&self, limit: Limit) -> Option<Hit> {
        self.incumbent.store(u64::MAX, Ordering::Relaxed);
        let reversed = vec![false; self.graph.arc_count()];
        let oriented = self.graph.with_reversed_flags(&reversed);
        let pairs = self.violating_pairs(&oriented);
        debug_assert!(!pairs.is_empty());

        let Some(branch) = self.pick_branch(&pairs, &[]) else {
            return None;
        };
        if self.bound_exceeded(&pairs, &[], 0, limit) {
            return None;
        }

        // Parallelize over the root branching arcs only; each branch explores
        // sequentially with its own duplicate-set table. The reduction is a
        // deterministic minimum, so the outcome is thread-count independent.
        branch
            .into_par_iter()
            .map(|arc| {
                let mut dedup = HashSet::new();
                let mut best = None;
                self.dfs(vec![arc], &mut dedup, &mut best, limit);
                best
            })
            .reduce(|| None, better)
    }

    /// Lowest-candidate violating pair, or `None` when some pair cannot be
    /// fixed at all (dead branch).
    fn pick_branch(&self, pairs: &[(usize, usize)], prefix: &[usize]) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for &(u, v) in pairs {
            let cand = self.pair_candidates(u, v, prefix);
            if cand.is_empty() {
                return None;
            }
            if best.as_ref().map_or(true, |b| cand.len() < b.len()) {
                best = Some(cand);
            }
        }
        best
    }

    /// Admissible lower bound: violating pairs with pairwise-disjoint
    /// candidate sets must each be fixed by distinct arcs.
    fn bound_exceeded(
        &self,
        pairs: &[(usize, usize)],
        prefix: &[usize],
        prefix_cost: u64,
        limit: Limit,
    ) -> bool {
        let mut sets: Vec<Vec<usize>> = pairs
            .iter()
            .map(|&(u, v)| self.pair_candidates(u, v, prefix))
            .collect();
        sets.sort_by_key(|s| s.len());
        let mut used = vec![false; self.graph.arc_count()];
        let mut extra = 0u64;
        for set in &sets {
            if set.iter().any(|&a| used[a]) {
                continue;
            }
            let min_cost = set
                .iter()
                .map(|&a| self.mode.arc_cost(self.graph, a))
                .min()
                .unwrap_or(0);
            extra = extra.saturating_add(min_cost.max(match self.mode {
                CostMode::Cardinality => 1,
                CostMode::Weight => 0,
            }));
            for &a in set {
                used[a] = true;
            }
        }
        let lower = prefix_cost.saturating_add(extra);
        match limit {
            Limit::Cardinality(level) => lower > level,
            Limit::Weight(k) => {
                lower > k || lower > self.incumbent.load(Ordering::Relaxed)
            }
        }
    }

    fn dfs(&self, prefix: Vec<usize>, dedup: &mut HashSet<Vec<usize>>, best: &mut Option<Hit>, limit: Limit) {
        let mut sorted = prefix.clone();
        sorted.sort_unstable();
        if !dedup.insert(sorted.clone()) {
            return;
        }
        let cost = self.mode.set_cost(self.graph, &sorted);
        if let Limit::Weight(k) = limit {
            if cost > k || cost > self.incumbent.load(Ordering::Relaxed) {
                return;
            }
        }

        let mut reversed = vec![false; self.graph.arc_count()];
        for &a in &sorted {
            reversed[a] = true;
        }
        let oriented = self.graph.with_reversed_flags(&reversed);
        let pairs = self.violating_pairs(&oriented);
        if pairs.is_empty() {
            self.incumbent.fetch_min(cost, Ordering::Relaxed);
            let hit = Some((cost, sorted));
            *best = better(best.take(), hit);
            return;
        }

        match limit {
            Limit::Cardinality(level) if sorted.len() as u64 >= level => return,
            _ => {}
        }
        let Some(branch) = self.pick_branch(&pairs, &sorted) else {
            return;
        };
        if self.bound_exceeded(&pairs, &sorted, cost, limit) {
            return;
        }
        for arc in branch {
            if let Limit::Weight(k) = limit {
                if cost.saturating_add(self.mode.arc_cost(self.graph, arc)) > k {
                    continue;
                }
            }
            let mut child = prefix.clone();
            child.push(arc);
            self.dfs(child, dedup, best, limit);
        }
    }
}

/// Globally minimum-cost solution by exhausting all `2^m` reversal subsets.
/// Ties are broken by the lexicographically smallest sorted arc-id sequence,
/// the same rule as `solve_k_reversals`.
pub fn oracle_min_reversals(
    graph: &Digraph,
    target_diameter: u64,
    mode: CostMode,
) -> Result<SolveOutcome, SolveError> {
    oracle_min_reversals_capped(graph, target_diameter, mode, DEFAULT_ORACLE_CAP)
}

pub fn oracle_min_reversals_capped(
    graph: &Digraph,
    target_diameter: u64,
    mode: CostMode,
    cap: usize,
) -> Result<SolveOutcome, SolveError> {
    let m = graph.arc_count();
    if m > cap || m >= 63 {
        return Err(SolveError::OracleCapExceeded { arcs: m, cap });
    }
    let best = (0u64..(1u64 << m))
        .into_par_iter()
        .map(|mask| {
            let ids: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            let reversed: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
            let oriented = graph.with_reversed_flags(&reversed);
            if oriented.diameter() <= ExtendedDistance::Finite(target_diameter) {
                Some((mode.set_cost(graph, &ids), ids))
            } else {
                None
            }
        })
        .reduce(|| None, better);
    match best {
        None => Ok(SolveOutcome::Infeasible),
        Some((cost, ids)) => {
            let witness = ReversalSet::new(ids);
            let achieved = graph.reverse_arcs(&witness)?.diameter();
            Ok(SolveOutcome::Feasible(Solution { witness, achieved_diameter: achieved, cost }))
        }
    }
}

/// Exhaustive cost profile: for every finitely achievable diameter value `d`,
/// the minimum reversal cost over all subsets reaching diameter at most `d`.
/// One subset sweep answers feasibility questions for an entire `(d, k)`
/// grid; used heavily by the oracle-equivalence test suites.
pub fn oracle_cost_profile(
    graph: &Digraph,
    mode: CostMode,
    cap: usize,
) -> Result<std::collections::BTreeMap<u64, u64>, SolveError> {
    let m = graph.arc_count();
    if m > cap || m >= 63 {
        return Err(SolveError::OracleCapExceeded { arcs: m, cap });
    }
    let per_diam = (0u64..(1u64 << m))
        .into_par_iter()
        .fold(std::collections::BTreeMap::new, |mut acc: std::collections::BTreeMap<u64, u64>, mask| {
            let reversed: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
            let oriented = graph.with_reversed_flags(&reversed);
            if let ExtendedDistance::Finite(diam) = oriented.diameter() {
                let ids: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
                let cost = mode.set_cost(graph, &ids);
                acc.entry(diam).and_modify(|c| *c = (*c).min(cost)).or_insert(cost);
            }
            acc
        })
        .reduce(std::collections::BTreeMap::new, |mut a, b| {
            for (diam, cost) in b {
                a.entry(diam).and_modify(|c| *c = (*c).min(cost)).or_insert(cost);
            }
            a
        });
    // Rewrite to running minima so `range(..=d).next_back()` answers
    // "min cost achieving diameter <= d".
    let mut out = std::collections::BTreeMap::new();
    let mut running = u64::MAX;
    for (diam, cost) in per_diam {
        running = running.min(cost);
        out.insert(diam, running);
    }
    Ok(out)
}

/// Minimum cost to reach diameter at most `d` according to a profile from
/// [`oracle_cost_profile`], or `None` if infeasible.
pub fn profile_min_cost(profile: &std::collections::BTreeMap<u64, u64>, d: u64) -> Option<u64> {
    profile.range(..=d).next_back().map(|(_, &c)| c)
}
