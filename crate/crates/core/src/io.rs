//! Wire formats: the JSON instance format, witness files, and DOT export.
//!
//! The instance format is `{"n": int, "arcs": [{"tail", "head", "weight"}]}`;
//! the order of the `arcs` array defines arc ids. `weight` may be omitted and
//! defaults to 1. Serialization is deterministic: identical inputs produce
//! byte-identical output.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Digraph, GraphError, ReversalSet};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceJson {
    n: usize,
    arcs: Vec<ArcJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ArcJson {
    tail: usize,
    head: usize,
    #[serde(default = "default_weight", skip_serializing_if = "is_default_weight")]
    weight: u64,
}

fn default_weight() -> u64 {
    1
}

fn is_default_weight(w: &u64) -> bool {
    *w == 1
}

pub fn digraph_from_json(text: &str) -> Result<Digraph, FormatError> {
    let inst: InstanceJson = serde_json::from_str(text)?;
    let g = Digraph::weighted(inst.n, inst.arcs.iter().map(|a| (a.tail, a.head, a.weight)))?;
    Ok(g)
}

pub fn digraph_to_json(graph: &Digraph) -> String {
    let inst = InstanceJson {
        n: graph.vertex_count(),
        arcs: graph
            .arcs()
            .iter()
            .map(|a| ArcJson {
                tail: a.tail,
                head: a.head,
                weight: a.weight,
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&inst).expect("instance serialization cannot fail");
    s.push('\n');
    s
}

/// DOT export for visualization; arcs are labeled with their weight when it
/// differs from 1.
pub fn digraph_to_dot(graph: &Digraph) -> String {
    let mut out = String::from("digraph G {\n");
    for v in 0..graph.vertex_count() {
        out.push_str(&format!("  {v};\n"));
    }
    for arc in graph.arcs() {
        if arc.weight == 1 {
            out.push_str(&format!("  {} -> {};\n", arc.tail, arc.head));
        } else {
            out.push_str(&format!(
                "  {} -> {} [label={}];\n",
                arc.tail, arc.head, arc.weight
            ));
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct WitnessJson {
    arc_ids: Vec<usize>,
}

pub fn witness_from_json(text: &str) -> Result<ReversalSet, FormatError> {
    let w: WitnessJson = serde_json::from_str(text)?;
    Ok(ReversalSet::new(w.arc_ids))
}

pub fn witness_to_json(witness: &ReversalSet) -> String {
    let w = WitnessJson {
        arc_ids: witness.ids().to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&w).expect("witness serialization cannot fail");
    s.push('\n');
    s
}
