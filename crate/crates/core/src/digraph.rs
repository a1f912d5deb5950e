//! Weighted directed multigraphs with stable arc identities.
//!
//! An arc's identity is its position in the arc list and survives reversal:
//! reversing arc `i` swaps its endpoints in place, so a reversal set computed
//! against the input instance remains meaningful after any number of
//! reversals. Parallel arcs are allowed; self-loops are rejected at
//! construction.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("arc {index} is a self-loop")]
    SelfLoop { index: usize },
    #[error("arc id {arc} out of range for graph with {m} arcs")]
    ArcOutOfRange { arc: usize, m: usize },
    #[error("underlying undirected graph is not connected")]
    Disconnected,
}

/// A single directed arc. `weight` doubles as path length (distance) and as
/// the reversal cost in weight mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub weight: u64,
}

/// Shortest-path distance that may be infinite (unreachable).
///
/// `Infinite` compares greater than every `Finite` value; addition saturates
/// into `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedDistance {
    Finite(u64),
    Infinite,
}

impl ExtendedDistance {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedDistance::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtendedDistance::Finite(v) => Some(v),
            ExtendedDistance::Infinite => None,
        }
    }

    pub fn add(self, other: ExtendedDistance) -> ExtendedDistance {
        match (self, other) {
            (ExtendedDistance::Finite(a), ExtendedDistance::Finite(b)) => {
                ExtendedDistance::Finite(a.saturating_add(b))
            }
            _ => ExtendedDistance::Infinite,
        }
    }
}

impl fmt::Display for ExtendedDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedDistance::Finite(v) => write!(f, "{v}"),
            ExtendedDistance::Infinite => write!(f, "inf"),
        }
    }
}

/// A set of arc identities to reverse, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReversalSet {
    ids: Vec<usize>,
}

impl ReversalSet {
    pub fn new(ids: impl IntoIterator<Item = usize>) -> Self {
        let mut ids: Vec<usize> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        ReversalSet { ids }
    }

    pub fn empty() -> Self {
        ReversalSet::default()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn cardinality(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, arc: usize) -> bool {
        self.ids.binary_search(&arc).is_ok()
    }

    pub fn validate(&self, graph: &Digraph) -> Result<(), GraphError> {
        match self.ids.last() {
            Some(&last) if last >= graph.arc_count() => Err(GraphError::ArcOutOfRange {
                arc: last,
                m: graph.arc_count(),
            }),
            _ => Ok(()),
        }
    }

    /// Sum of the member arcs' weights in the host graph.
    pub fn total_weight(&self, graph: &Digraph) -> Result<u64, GraphError> {
        self.validate(graph)?;
        Ok(self.ids.iter().map(|&i| graph.arcs()[i].weight).sum())
    }
}

impl fmt::Display for ReversalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, id) in self.ids.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{id}")?;
        }
        write!(f, "}}")
    }
}

/// A weighted directed multigraph. Immutable after construction; all
/// operations are pure functions, so values can be shared freely across
/// threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<Arc>,
    out_adj: Vec<Vec<(usize, u64)>>,
    unit_weight: bool,
}

impl Digraph {
    /// Unit-weight graph from (tail, head) pairs.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        Self::weighted(n, arcs.into_iter().map(|(t, h)| (t, h, 1)))
    }

    pub fn weighted(
        n: usize,
        arcs: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (index, (tail, head, weight)) in arcs.into_iter().enumerate() {
            if tail >= n {
                return Err(GraphError::VertexOutOfRange { vertex: tail, n });
            }
            if head >= n {
                return Err(GraphError::VertexOutOfRange { vertex: head, n });
            }
            if tail == head {
                return Err(GraphError::SelfLoop { index });
            }
            list.push(Arc { tail, head, weight });
        }
        Ok(Self::from_arcs(n, list))
    }

    fn from_arcs(n: usize, arcs: Vec<Arc>) -> Self {
        let mut out_adj = vec![Vec::new(); n];
        for arc in &arcs {
            out_adj[arc.tail].push((arc.head, arc.weight));
        }
        let unit_weight = arcs.iter().all(|a| a.weight == 1);
        Digraph {
            n,
            arcs,
            out_adj,
            unit_weight,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: usize) -> Result<&Arc, GraphError> {
        self.arcs.get(id).ok_or(GraphError::ArcOutOfRange {
            arc: id,
            m: self.arcs.len(),
        })
    }

    pub fn total_weight(&self) -> u64 {
        self.arcs.iter().map(|a| a.weight).sum()
    }

    pub fn is_unit_weight(&self) -> bool {
        self.unit_weight
    }

    /// The graph with exactly the arcs in `f` reversed. Weights and arc
    /// identities are unchanged; reversing twice restores the original.
    pub fn reverse_arcs(&self, f: &ReversalSet) -> Result<Digraph, GraphError> {
        f.validate(self)?;
        let mut arcs = self.arcs.clone();
        for &id in f.ids() {
            let a = arcs[id];
            arcs[id] = Arc {
                tail: a.head,
                head: a.tail,
                weight: a.weight,
            };
        }
        Ok(Self::from_arcs(self.n, arcs))
    }

    pub fn reverse_all(&self) -> Digraph {
        self.reverse_arcs(&ReversalSet::new(0..self.arc_count()))
            .expect("full reversal set is always valid")
    }

    /// Copy with arc `i` reversed wherever `reversed[i]` holds.
    pub(crate) fn with_reversed_flags(&self, reversed: &[bool]) -> Digraph {
        debug_assert_eq!(reversed.len(), self.arcs.len());
        let arcs = self
            .arcs
            .iter()
            .zip(reversed)
            .map(|(a, &r)| {
                if r {
                    Arc { tail: a.head, head: a.tail, weight: a.weight }
                } else {
                    *a
                }
            })
            .collect();
        Self::from_arcs(self.n, arcs)
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Single-source shortest distances. BFS for unit weights, binary-heap
    /// Dijkstra otherwise (weights are nonnegative integers).
    pub fn distances_from(&self, source: usize) -> Vec<ExtendedDistance> {
        debug_assert!(source < self.n);
        if self.unit_weight {
            self.bfs_from(source)
        } else {
            self.dijkstra_from(source)
        }
    }

    fn bfs_from(&self, source: usize) -> Vec<ExtendedDistance> {
        let mut dist = vec![ExtendedDistance::Infinite; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[source] = ExtendedDistance::Finite(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].finite().unwrap();
            for &(v, _) in &self.out_adj[u] {
                if dist[v] == ExtendedDistance::Infinite {
                    dist[v] = ExtendedDistance::Finite(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn dijkstra_from(&self, source: usize) -> Vec<ExtendedDistance> {
        let mut dist = vec![ExtendedDistance::Infinite; self.n];
        let mut heap = BinaryHeap::new();
        dist[source] = ExtendedDistance::Finite(0);
        heap.push(Reverse((0u64, source)));
        while let Some(Reverse((du, u))) = heap.pop() {
            if dist[u] != ExtendedDistance::Finite(du) {
                continue;
            }
            for &(v, w) in &self.out_adj[u] {
                let cand = du.saturating_add(w);
                if ExtendedDistance::Finite(cand) < dist[v] {
                    dist[v] = ExtendedDistance::Finite(cand);
                    heap.push(Reverse((cand, v)));
                }
            }
        }
        dist
    }

    /// Exact shortest-path weight from `u` to `v`; `Finite(0)` when `u == v`.
    pub fn distance(&self, u: usize, v: usize) -> Result<ExtendedDistance, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.distances_from(u)[v])
    }

    /// Maximum distance over ordered pairs of distinct vertices; `Finite`
    /// exactly when the graph is strongly connected. Graphs with fewer than
    /// two vertices have diameter 0.
    pub fn diameter(&self) -> ExtendedDistance {
        let mut best = ExtendedDistance::Finite(0);
        for u in 0..self.n {
            let dist = self.distances_from(u);
            for (v, &d) in dist.iter().enumerate() {
                if v == u {
                    continue;
                }
                if d == ExtendedDistance::Infinite {
                    return ExtendedDistance::Infinite;
                }
                best = best.max(d);
            }
        }
        best
    }

    /// True iff every ordered pair of vertices is connected by a directed
    /// path. Checked by one forward and one backward reachability sweep.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let forward = self.reach_count(0, false);
        if forward < self.n {
            return false;
        }
        self.reach_count(0, true) == self.n
    }

    fn reach_count(&self, start: usize, reversed: bool) -> usize {
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1;
        // Reversed sweep walks arcs head -> tail.
        let mut in_adj: Vec<Vec<usize>> = Vec::new();
        if reversed {
            in_adj = vec![Vec::new(); self.n];
            for arc in &self.arcs {
                in_adj[arc.head].push(arc.tail);
            }
        }
        while let Some(u) = stack.pop() {
            if reversed {
                for &v in &in_adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        count += 1;
                        stack.push(v);
                    }
                }
            } else {
                for &(v, _) in &self.out_adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        count += 1;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    /// Shortest-path weights in the underlying undirected multigraph.
    /// The undirected structure is invariant under reversal, which makes
    /// these distances reusable across an entire solver search.
    pub(crate) fn undirected_distances_from(&self, source: usize) -> Vec<ExtendedDistance> {
        let mut adj = vec![Vec::new(); self.n];
        for arc in &self.arcs {
            adj[arc.tail].push((arc.head, arc.weight));
            adj[arc.head].push((arc.tail, arc.weight));
        }
        let mut dist = vec![ExtendedDistance::Infinite; self.n];
        let mut heap = BinaryHeap::new();
        dist[source] = ExtendedDistance::Finite(0);
        heap.push(Reverse((0u64, source)));
        while let Some(Reverse((du, u))) = heap.pop() {
            if dist[u] != ExtendedDistance::Finite(du) {
                continue;
            }
            for &(v, w) in &adj[u] {
                let cand = du.saturating_add(w);
                if ExtendedDistance::Finite(cand) < dist[v] {
                    dist[v] = ExtendedDistance::Finite(cand);
                    heap.push(Reverse((cand, v)));
                }
            }
        }
        dist
    }

    pub(crate) fn is_undirected_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.undirected_distances_from(0)
            .iter()
            .all(|d| d.is_finite())
    }
}
