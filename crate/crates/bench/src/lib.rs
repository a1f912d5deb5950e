//! Instance builders shared by the benchmarks.

use rand::Rng;
use revdiam_core::digraph::Digraph;

/// Random digraph with `n` vertices and `m` arcs, no self-loops.
pub fn random_digraph(rng: &mut impl Rng, n: usize, m: usize) -> Digraph {
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

/// Chain of `cycles` unit-weight cycles of length `len`, each arc directed at
/// random.
pub fn random_cactus_chain(rng: &mut impl Rng, cycles: usize, len: usize) -> Digraph {
    let mut arcs = Vec::new();
    let mut attach = 0usize;
    let mut next = 1usize;
    for _ in 0..cycles {
        let mut ring = vec![attach];
        for _ in 1..len {
            ring.push(next);
            next += 1;
        }
        for i in 0..len {
            let (a, b) = (ring[i], ring[(i + 1) % len]);
            if rng.gen_bool(0.5) {
                arcs.push((a, b));
            } else {
                arcs.push((b, a));
            }
        }
        attach = next - 1;
    }
    Digraph::new(next, arcs).unwrap()
}
