//! Shared instance generators for the integration and acceptance suites.

use rand::Rng;
use revdiam_core::digraph::Digraph;

/// Random digraph: no self-loops, parallel arcs allowed.
pub fn random_digraph(rng: &mut impl Rng, max_n: usize, max_m: usize) -> Digraph {
    let n = rng.gen_range(2..=max_n);
    let m = rng.gen_range(1..=max_m);
    let arcs: Vec<(usize, usize)> = (0..m)
        .map(|_| loop {
            let t = rng.gen_range(0..n);
            let h = rng.gen_range(0..n);
            if t != h {
                return (t, h);
            }
        })
        .collect();
    Digraph::new(n, arcs).unwrap()
}

/// Random bridgeless cactus digraph: a first cycle plus up to `max_cycles - 1`
/// cycles attached at random existing vertices, every arc directed at random,
/// weights in `1..=max_weight`.
pub fn random_cactus(
    rng: &mut impl Rng,
    max_cycles: usize,
    max_arcs: usize,
    max_weight: u64,
) -> Digraph {
    let cycles = rng.gen_range(1..=max_cycles);
    let mut n = 0usize;
    let mut arcs: Vec<(usize, usize, u64)> = Vec::new();
    let mut verts: Vec<usize> = Vec::new();
    for _ in 0..cycles {
        let len = rng.gen_range(2..=5usize);
        if arcs.len() + len > max_arcs {
            break;
        }
        let attach = if verts.is_empty() {
            let v = n;
            n += 1;
            verts.push(v);
            v
        } else {
            verts[rng.gen_range(0..verts.len())]
        };
        let mut ring = vec![attach];
        for _ in 1..len {
            ring.push(n);
            verts.push(n);
            n += 1;
        }
        for i in 0..len {
            let (a, b) = (ring[i], ring[(i + 1) % len]);
            let w = rng.gen_range(1..=max_weight);
            if rng.gen_bool(0.5) {
                arcs.push((a, b, w));
            } else {
                arcs.push((b, a, w));
            }
        }
    }
    Digraph::weighted(n, arcs).unwrap()
}
