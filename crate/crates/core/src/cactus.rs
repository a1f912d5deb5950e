//! Cactus recognition and cycle-tree decomposition.
//!
//! A connected multigraph is a cactus exactly when every biconnected block is
//! a single edge (a bridge) or a simple cycle. The decomposition returns the
//! cycles with a fixed traversal order plus the tree structure induced by
//! shared cut vertices. Orientation of the arcs is irrelevant here; only the
//! underlying undirected multigraph matters.

use std::collections::HashMap;

use crate::digraph::{Digraph, GraphError};

/// One simple cycle: `arcs[i]` joins `vertices[i]` and `vertices[(i+1) % len]`
/// in the underlying undirected graph. The stored order fixes what "clockwise"
/// means for this cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub arcs: Vec<usize>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// True iff arc `slot` points from `vertices[slot]` to the next vertex in
    /// the stored traversal.
    pub fn arc_agrees_with_traversal(&self, graph: &Digraph, slot: usize) -> bool {
        let arc = &graph.arcs()[self.arcs[slot]];
        arc.tail == self.vertices[slot]
    }
}

/// Cycles of a cactus linked into a tree at shared cut vertices.
///
/// When several cycles meet at one vertex the tree edges form a star around
/// the lowest-indexed one. `root` is only meaningful when `cycles` is
/// nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleTree {
    pub cycles: Vec<Cycle>,
    pub tree_edges: Vec<(usize, usize, usize)>,
    pub root: usize,
}

impl CycleTree {
    /// Multiset of arc ids covered by the cycles, sorted.
    pub fn covered_arcs(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.cycles.iter().flat_map(|c| c.arcs.iter().copied()).collect();
        all.sort_unstable();
        all
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CactusDecomposition {
    Tree(CycleTree),
    /// Some biconnected block is neither an edge nor a simple cycle, i.e. two
    /// simple cycles share at least two vertices.
    NotCactus,
    /// Some edge lies on no cycle; `arc` is the lowest-id such arc.
    HasBridge { arc: usize },
}

/// Decompose the underlying undirected multigraph into its cycle tree.
///
/// Parallel arc pairs count as 2-cycles. Returns `Err(Disconnected)` when the
/// underlying graph is not connected.
pub fn cactus_decompose(graph: &Digraph) -> Result<CactusDecomposition, GraphError> {
    if !graph.is_undirected_connected() {
        return Err(GraphError::Disconnected);
    }
    let blocks = biconnected_blocks(graph);

    let mut bridge: Option<usize> = None;
    let mut cycles = Vec::new();
    for block in &blocks {
        if block.len() == 1 {
            let arc = block[0];
            bridge = Some(bridge.map_or(arc, |b| b.min(arc)));
            continue;
        }
        match block_as_cycle(graph, block) {
            Some(cycle) => cycles.push(cycle),
            None => return Ok(CactusDecomposition::NotCactus),
        }
    }
    if let Some(arc) = bridge {
        return Ok(CactusDecomposition::HasBridge { arc });
    }

    cycles.sort_by_key(|c| c.arcs.iter().copied().min().unwrap_or(usize::MAX));

    let mut cycles_at: Vec<Vec<usize>> = vec![Vec::new(); graph.vertex_count()];
    for (ci, cycle) in cycles.iter().enumerate() {
        for &v in &cycle.vertices {
            cycles_at[v].push(ci);
        }
    }
    let mut tree_edges = Vec::new();
    for (v, at) in cycles_at.iter().enumerate() {
        if let Some((&hub, rest)) = at.split_first() {
            for &other in rest {
                tree_edges.push((hub, other, v));
            }
        }
    }

    Ok(CactusDecomposition::Tree(CycleTree {
        cycles,
        tree_edges,
        root: 0,
    }))
}

/// True iff the connected underlying undirected multigraph has a bridge.
/// No orientation of a bridged graph is strongly connected.
pub(crate) fn has_undirected_bridge(graph: &Digraph) -> bool {
    biconnected_blocks(graph).iter().any(|b| b.len() == 1)
}

/// Edge sets of the biconnected blocks (Hopcroft–Tarjan, iterative).
/// Assumes the underlying graph is connected and nonempty of vertices.
fn biconnected_blocks(graph: &Digraph) -> Vec<Vec<usize>> {
    let n = graph.vertex_count();
    if n == 0 {
        return Vec::new();
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, arc) in graph.arcs().iter().enumerate() {
        adj[arc.tail].push((arc.head, id));
        adj[arc.head].push((arc.tail, id));
    }

    const UNSET: usize = usize::MAX;
    let mut disc = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut timer = 0usize;
    let mut estack: Vec<usize> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    // frame: (vertex, entering edge id, next adjacency index)
    let mut frames: Vec<(usize, usize, usize)> = vec![(0, UNSET, 0)];
    disc[0] = timer;
    low[0] = timer;
    timer += 1;

    while let Some(&mut (v, parent_edge, ref mut idx)) = frames.last_mut() {
        if *idx < adj[v].len() {
            let (w, eid) = adj[v][*idx];
            *idx += 1;
            if eid == parent_edge {
                continue;
            }
            if disc[w] == UNSET {
                estack.push(eid);
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                frames.push((w, eid, 0));
            } else if disc[w] < disc[v] {
                // Back edge to an ancestor; a parallel twin of the entering
                // edge lands here and closes a 2-cycle.
                estack.push(eid);
                low[v] = low[v].min(disc[w]);
            }
        } else {
            frames.pop();
            if let Some(&mut (u, _, _)) = frames.last_mut() {
                low[u] = low[u].min(low[v]);
                if low[v] >= disc[u] {
                    let mut block = Vec::new();
                    loop {
                        let e = estack.pop().expect("block edge stack underflow");
                        block.push(e);
                        if e == parent_edge {
                            break;
                        }
                    }
                    blocks.push(block);
                }
            }
        }
    }
    debug_assert!(estack.is_empty());
    blocks
}

/// Interpret a multi-edge block as a simple cycle with a deterministic
/// traversal (start at the lowest vertex, leave along the lowest arc id).
/// Returns `None` when the block is not a cycle.
fn block_as_cycle(graph: &Digraph, block: &[usize]) -> Option<Cycle> {
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for &eid in block {
        let arc = &graph.arcs()[eid];
        incident.entry(arc.tail).or_default().push(eid);
        incident.entry(arc.head).or_default().push(eid);
    }
    if incident.len() != block.len() {
        return None;
    }
    if incident.values().any(|es| es.len() != 2) {
        return None;
    }

    let start = *incident.keys().min().unwrap();
    let first = *incident[&start].iter().min().unwrap();
    let mut vertices = vec![start];
    let mut arcs = Vec::with_capacity(block.len());
    let mut cur = start;
    let mut via = first;
    loop {
        arcs.push(via);
        let arc = &graph.arcs()[via];
        cur = if arc.tail == cur { arc.head } else { arc.tail };
        if cur == start {
            break;
        }
        vertices.push(cur);
        let es = &incident[&cur];
        via = if es[0] == via { es[1] } else { es[0] };
    }
    debug_assert_eq!(vertices.len(), arcs.len());
    Some(Cycle { vertices, arcs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;

    #[test]
    fn single_cycle_decomposes_to_one_cycle() {
        let g = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        match cactus_decompose(&g).unwrap() {
            CactusDecomposition::Tree(t) => {
                assert_eq!(t.cycles.len(), 1);
                assert!(t.tree_edges.is_empty());
                assert_eq!(t.cycles[0].len(), 3);
            }
            other => panic!("expected tree, got {other:?}"),
        }
    }

    #[test]
    fn two_triangles_share_a_vertex() {
        let g = Digraph::new(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        match cactus_decompose(&g).unwrap() {
            CactusDecomposition::Tree(t) => {
                assert_eq!(t.cycles.len(), 2);
                assert_eq!(t.tree_edges.len(), 1);
                assert_eq!(t.tree_edges[0].2, 2);
            }
            other => panic!("expected tree, got {other:?}"),
        }
    }

    #[test]
    fn parallel_arc_chain_is_a_path_of_two_cycles() {
        // Shape of the subset-sum reduction graph for three values: parallel
        // pairs v1=v2=v3=v4, six arcs, three 2-cycles in a path.
        let g = Digraph::weighted(
            4,
            [(0, 1, 1), (0, 1, 2), (1, 2, 1), (1, 2, 2), (2, 3, 1), (2, 3, 3)],
        )
        .unwrap();
        match cactus_decompose(&g).unwrap() {
            CactusDecomposition::Tree(t) => {
                assert_eq!(t.cycles.len(), 3);
                assert!(t.cycles.iter().all(|c| c.len() == 2));
                assert_eq!(t.tree_edges.len(), 2);
                let mut shared: Vec<usize> = t.tree_edges.iter().map(|e| e.2).collect();
                shared.sort_unstable();
                assert_eq!(shared, vec![1, 2]);
            }
            other => panic!("expected tree, got {other:?}"),
        }
    }

    #[test]
    fn bridge_is_reported() {
        let g = Digraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(
            cactus_decompose(&g).unwrap(),
            CactusDecomposition::HasBridge { arc: 0 }
        );
        let g = Digraph::new(4, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert_eq!(
            cactus_decompose(&g).unwrap(),
            CactusDecomposition::HasBridge { arc: 3 }
        );
    }

    #[test]
    fn k4_is_not_a_cactus() {
        let g = Digraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(cactus_decompose(&g).unwrap(), CactusDecomposition::NotCactus);
    }

    #[test]
    fn theta_graph_is_not_a_cactus() {
        // Two vertices joined by three internally disjoint paths.
        let g = Digraph::new(5, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap();
        assert_eq!(cactus_decompose(&g).unwrap(), CactusDecomposition::NotCactus);
    }

    #[test]
    fn disconnected_input_is_an_error() {
        let g = Digraph::new(4, [(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        assert_eq!(cactus_decompose(&g), Err(GraphError::Disconnected));
    }

    #[test]
    fn flower_of_cycles_builds_a_star_tree() {
        // Three 2-cycles all meeting at vertex 0.
        let g = Digraph::new(
            4,
            [(0, 1), (1, 0), (0, 2), (2, 0), (0, 3), (3, 0)],
        )
        .unwrap();
        match cactus_decompose(&g).unwrap() {
            CactusDecomposition::Tree(t) => {
                assert_eq!(t.cycles.len(), 3);
                assert_eq!(t.tree_edges.len(), 2);
                assert!(t.tree_edges.iter().all(|&(a, _, v)| a == 0 && v == 0));
            }
            other => panic!("expected tree, got {other:?}"),
        }
    }

    #[test]
    fn cycles_cover_every_arc_exactly_once() {
        let g = Digraph::new(
            7,
            [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (4, 5), (5, 6), (6, 4)],
        )
        .unwrap();
        match cactus_decompose(&g).unwrap() {
            CactusDecomposition::Tree(t) => {
                assert_eq!(t.covered_arcs(), (0..9).collect::<Vec<_>>());
            }
            other => panic!("expected tree, got {other:?}"),
        }
    }

    #[test]
    fn empty_and_single_vertex_graphs() {
        let g = Digraph::new(1, []).unwrap();
        match cactus_decompose(&g).unwrap() {
            CactusDecomposition::Tree(t) => assert!(t.cycles.is_empty()),
            other => panic!("expected empty tree, got {other:?}"),
        }
    }
}
