//! Instance generators for the two hardness reductions, with bidirectional
//! solution mapping.
//!
//! * Dominating set -> bounded arc reversal: one 8-vertex gadget per source
//!   vertex, target diameter 3, budget = requested dominating-set size. The
//!   generated digraph always has diameter exactly 4; this is asserted at
//!   generation time.
//! * Subset sum (partition) -> weighted arc reversal on a cactus: a chain of
//!   parallel arc pairs weighted `1` and `a_i + 1`, target diameter and
//!   budget both `b + n` where `2b` is the value sum.

use std::collections::HashMap;

use thiserror::Error;

use crate::digraph::{Digraph, ExtendedDistance, GraphError, ReversalSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("edge ({u}, {v}) is a self-loop")]
    SelfLoopEdge { u: usize, v: usize },
    #[error("edge ({u}, {v}) appears more than once")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("partition values must be nonempty")]
    EmptyPartition,
    #[error("partition values must be positive")]
    NonPositiveValue,
    #[error("partition values sum to {sum}, which is odd")]
    OddPartitionSum { sum: u64 },
    #[error("generated gadget graph has diameter {got}, expected 4")]
    GadgetDiameterBroken { got: ExtendedDistance },
    #[error("witness arc {arc} is not an upper core arc of any gadget")]
    NonCanonicalWitnessArc { arc: usize },
    #[error("witness does not solve the generated instance")]
    InvalidWitness,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Undirected simple graph: no self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ReductionError> {
        let mut norm = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(ReductionError::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(ReductionError::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(ReductionError::SelfLoopEdge { u, v });
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(ReductionError::DuplicateEdge { u: w[0].0, v: w[0].1 });
        }
        Ok(SimpleGraph { n, edges: norm })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatingSetInstance {
    pub graph: SimpleGraph,
    pub ell: u64,
}

/// Vertex and arc ids of one gadget: upper/down core vertices, their
/// auxiliaries, and the upper core arc whose reversal encodes "select this
/// source vertex".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub source_vertex: usize,
    pub upper: [usize; 2],
    pub down: [usize; 2],
    pub aux_upper: [usize; 2],
    pub aux_down: [usize; 2],
    pub upper_core_arc: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GadgetMap {
    pub gadgets: Vec<Gadget>,
}

#[derive(Debug, Clone)]
pub struct DsReduction {
    pub digraph: Digraph,
    pub target_diameter: u64,
    pub budget: u64,
    pub map: GadgetMap,
}

// Offsets inside one 8-vertex gadget block.
const U1: usize = 0;
const U2: usize = 1;
const D1: usize = 2;
const D2: usize = 3;
const AU1: usize = 4;
const AU2: usize = 5;
const AD1: usize = 6;
const AD2: usize = 7;
const AUX: [usize; 4] = [AU1, AU2, AD1, AD2];

/// Build the bounded-reversal instance `(H, d = 3, k = ell)` for a dominating
/// set question.
///
/// Vertex ids: gadget `i` occupies `[8i, 8i + 8)` in the order
/// `(u1, u2, d1, d2, au1, au2, ad1, ad2)`. Arc ids: first every gadget's four
/// core arcs (so gadget `i`'s upper core arc has id `4i`), then every
/// gadget's auxiliary arcs, then the per-source-edge connector arcs sorted by
/// edge, then the all-pairs cross-gadget auxiliary arcs.
pub fn dominating_set_to_kreversals(
    inst: &DominatingSetInstance,
) -> Result<DsReduction, ReductionError> {
    let n = inst.graph.vertex_count();
    let id = |i: usize, off: usize| 8 * i + off;
    let mut arcs: Vec<(usize, usize)> = Vec::new();

    for i in 0..n {
        arcs.push((id(i, U1), id(i, U2)));
        arcs.push((id(i, D1), id(i, D2)));
        arcs.push((id(i, U1), id(i, D1)));
        arcs.push((id(i, D2), id(i, U2)));
    }
    for i in 0..n {
        for (vertex, aux) in [(U1, AU1), (U2, AU2), (D1, AD1), (D2, AD2)] {
            arcs.push((id(i, vertex), id(i, aux)));
            arcs.push((id(i, aux), id(i, vertex)));
        }
        // All auxiliary pairs except (ad1, ad2) are joined both ways.
        for (a, b) in [(AU1, AU2), (AU1, AD1), (AU1, AD2), (AU2, AD1), (AU2, AD2)] {
            arcs.push((id(i, a), id(i, b)));
            arcs.push((id(i, b), id(i, a)));
        }
    }
    for &(i, j) in inst.graph.edges() {
        arcs.push((id(i, U1), id(j, D1)));
        arcs.push((id(j, D2), id(i, U2)));
        arcs.push((id(j, U1), id(i, D1)));
        arcs.push((id(i, D2), id(j, U2)));
    }
    for i in 0..n {
        for j in i + 1..n {
            for a in AUX {
                for b in AUX {
                    arcs.push((id(i, a), id(j, b)));
                    arcs.push((id(j, b), id(i, a)));
                }
            }
        }
    }

    let digraph = Digraph::new(8 * n, arcs)?;
    if n > 0 {
        let diam = digraph.diameter();
        if diam != ExtendedDistance::Finite(4) {
            return Err(ReductionError::GadgetDiameterBroken { got: diam });
        }
    }

    let map = GadgetMap {
        gadgets: (0..n)
            .map(|i| Gadget {
                source_vertex: i,
                upper: [id(i, U1), id(i, U2)],
                down: [id(i, D1), id(i, D2)],
                aux_upper: [id(i, AU1), id(i, AU2)],
                aux_down: [id(i, AD1), id(i, AD2)],
                upper_core_arc: 4 * i,
            })
            .collect(),
    };
    Ok(DsReduction { digraph, target_diameter: 3, budget: inst.ell, map })
}

/// Read a dominating set out of a witness. Every witness arc must be some
/// gadget's upper core arc; anything else indicates a generator or solver
/// bug and is an error.
pub fn extract_dominating_set(
    witness: &ReversalSet,
    map: &GadgetMap,
) -> Result<Vec<usize>, ReductionError> {
    let by_arc: HashMap<usize, usize> = map
        .gadgets
        .iter()
        .map(|g| (g.upper_core_arc, g.source_vertex))
        .collect();
    let mut chosen = Vec::new();
    for &arc in witness.ids() {
        match by_arc.get(&arc) {
            Some(&v) => chosen.push(v),
            None => return Err(ReductionError::NonCanonicalWitnessArc { arc }),
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Positive integers with an even sum `2b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    values: Vec<u64>,
    half_sum: u64,
}

impl PartitionInstance {
    pub fn new(values: Vec<u64>) -> Result<Self, ReductionError> {
        if values.is_empty() {
            return Err(ReductionError::EmptyPartition);
        }
        if values.iter().any(|&v| v == 0) {
            return Err(ReductionError::NonPositiveValue);
        }
        let sum: u64 = values.iter().sum();
        if sum % 2 != 0 {
            return Err(ReductionError::OddPartitionSum { sum });
        }
        Ok(PartitionInstance { half_sum: sum / 2, values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn half_sum(&self) -> u64 {
        self.half_sum
    }
}

#[derive(Debug, Clone)]
pub struct PartitionReduction {
    pub digraph: Digraph,
    pub target_diameter: u64,
    pub budget: u64,
    pub half_sum: u64,
    /// Arc ids of the unit arcs `e_i` and the heavy arcs `f_i` (weight
    /// `a_i + 1`), index-aligned with the instance values.
    pub unit_arcs: Vec<usize>,
    pub heavy_arcs: Vec<usize>,
}

/// Build the weighted instance on a chain of parallel arc pairs: vertices
/// `v_1 .. v_{n+1}`, arcs `e_i` (weight 1) and `f_i` (weight `a_i + 1`) both
/// from `v_i` to `v_{i+1}`, target diameter and weight budget `b + n`.
/// The generated graph has infinite diameter.
pub fn partition_to_weighted_kreversals(inst: &PartitionInstance) -> PartitionReduction {
    let n = inst.values.len();
    let mut arcs = Vec::with_capacity(2 * n);
    let mut unit_arcs = Vec::with_capacity(n);
    let mut heavy_arcs = Vec::with_capacity(n);
    for (i, &a) in inst.values.iter().enumerate() {
        unit_arcs.push(arcs.len());
        arcs.push((i, i + 1, 1));
        heavy_arcs.push(arcs.len());
        arcs.push((i, i + 1, a + 1));
    }
    let digraph = Digraph::weighted(n + 1, arcs).expect("chain construction is always valid");
    debug_assert_eq!(digraph.diameter(), ExtendedDistance::Infinite);
    let bound = inst.half_sum + n as u64;
    PartitionReduction {
        digraph,
        target_diameter: bound,
        budget: bound,
        half_sum: inst.half_sum,
        unit_arcs,
        heavy_arcs,
    }
}

/// Read the selected index set out of a witness: `i` is selected when the
/// heavy arc `f_i` still points forward after applying the witness. For any
/// valid witness the selected values sum to `b`.
pub fn extract_partition(
    witness: &ReversalSet,
    inst: &PartitionInstance,
    red: &PartitionReduction,
) -> Result<Vec<usize>, ReductionError> {
    witness.validate(&red.digraph)?;
    let reversed = red.digraph.reverse_arcs(witness)?;
    if reversed.diameter() > ExtendedDistance::Finite(red.target_diameter)
        || witness.total_weight(&red.digraph)? > red.budget
    {
        return Err(ReductionError::InvalidWitness);
    }
    let selected: Vec<usize> = red
        .heavy_arcs
        .iter()
        .enumerate()
        .filter(|&(_, &f)| !witness.contains(f))
        .map(|(i, _)| i)
        .collect();
    let sum: u64 = selected.iter().map(|&i| inst.values()[i]).sum();
    debug_assert_eq!(sum, inst.half_sum());
    Ok(selected)
}
