//! Directed edge polytopes and exact lattice-normalized volumes.
//!
//! The polytope of a digraph is the convex hull of one point `e_head -
//! e_tail` per arc, which lives in the sum-zero hyperplane. Volumes are
//! lattice-normalized relative to the sublattice of that hyperplane
//! (Euclidean volume times `dim!` in a lattice basis) and recovered by
//! Ehrhart interpolation: count the lattice points of `t * P` for
//! `t = 0 ..= dim` and take the `dim`-th finite difference of the counts.
//! Membership of a lattice point in a dilate is an exact rational
//! feasibility question, decided by a phase-1 simplex with fraction-free
//! integer pivoting (Bland's rule, so termination is guaranteed; entries are
//! minors of the small input matrix and stay far below the `i128` range).
//!
//! For cactus digraphs whose cycles are directed cycles, the polytope is a
//! free sum of cycle simplices and the normalized volume is the product of
//! the cycle lengths, independent of the cycles' directions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::cactus::CycleTree;
use crate::digraph::{Digraph, ExtendedDistance};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("edge polytopes need at least 2 vertices and 1 arc")]
    DegenerateGraph,
    #[error("{count} generators exceed the cap {cap}")]
    GeneratorCapExceeded { count: usize, cap: usize },
    #[error("affine dimension {dim} exceeds the cap {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },
    #[error("cycle {cycle} is not oriented as a directed cycle")]
    NonCyclicCycle { cycle: usize },
    #[error("counter-example family starts at 8, got {i}")]
    IndexTooSmall { i: u64 },
    #[error("{arcs} arcs is too many for an orientation sweep (cap {cap})")]
    SweepTooLarge { arcs: usize, cap: usize },
}

/// Generator points of a directed edge polytope, one per arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePointSet {
    pub ambient_dim: usize,
    pub points: Vec<Vec<i64>>,
}

impl LatticePointSet {
    /// Distinct generators (parallel same-direction arcs collapse).
    pub fn deduped(&self) -> Vec<Vec<i64>> {
        let mut pts = self.points.clone();
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    /// Dimension of the affine hull of the generators.
    pub fn affine_dim(&self) -> usize {
        let pts = self.deduped();
        integer_rank(
            &pts[1..]
                .iter()
                .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
                .collect::<Vec<Vec<i64>>>(),
        )
    }
}

/// Rank of an integer matrix by fraction-free Gaussian elimination.
fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let height = m.len();
    if height == 0 {
        return 0;
    }
    let width = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < height && col < width {
        let Some(pivot_row) = (rank..height).find(|&r| m[r][col] != 0) else {
            col += 1;
            continue;
        };
        m.swap(rank, pivot_row);
        for r in rank + 1..height {
            if m[r][col] != 0 {
                let (a, b) = (m[rank][col], m[r][col]);
                let g = gcd(a.unsigned_abs(), b.unsigned_abs()) as i128;
                let (fa, fb) = (a / g, b / g);
                for c in col..width {
                    m[r][c] = m[r][c] * fa - m[rank][c] * fb;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Exact rational, integer-valued for lattice polytopes under this
/// normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalVolume(pub BigRational);

impl RationalVolume {
    pub fn from_integer(v: u64) -> Self {
        RationalVolume(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn numer(&self) -> BigInt {
        self.0.numer().clone()
    }

    pub fn denom(&self) -> BigInt {
        self.0.denom().clone()
    }
}

impl std::fmt::Display for RationalVolume {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// One generator point per arc of `graph`; weights are ignored.
pub fn directed_edge_polytope(graph: &Digraph) -> Result<LatticePointSet, PolytopeError> {
    if graph.vertex_count() < 2 || graph.arc_count() == 0 {
        return Err(PolytopeError::DegenerateGraph);
    }
    let n = graph.vertex_count();
    let points = graph
        .arcs()
        .iter()
        .map(|a| {
            let mut p = vec![0i64; n];
            p[a.head] = 1;
            p[a.tail] = -1;
            p
        })
        .collect();
    Ok(LatticePointSet { ambient_dim: n, points })
}

#[derive(Debug, Clone, Copy)]
pub struct VolumeCaps {
    pub max_generators: usize,
    pub max_affine_dim: usize,
}

impl Default for VolumeCaps {
    fn default() -> Self {
        VolumeCaps { max_generators: 16, max_affine_dim: 6 }
    }
}

pub fn normalized_volume(p: &LatticePointSet) -> Result<RationalVolume, PolytopeError> {
    normalized_volume_with_caps(p, VolumeCaps::default())
}

pub fn normalized_volume_with_caps(
    p: &LatticePointSet,
    caps: VolumeCaps,
) -> Result<RationalVolume, PolytopeError> {
    let generators = p.deduped();
    if generators.len() > caps.max_generators {
        return Err(PolytopeError::GeneratorCapExceeded {
            count: generators.len(),
            cap: caps.max_generators,
        });
    }
    let dim = p.affine_dim();
    if dim > caps.max_affine_dim {
        return Err(PolytopeError::DimensionCapExceeded { dim, cap: caps.max_affine_dim });
    }
    let counts: Vec<u64> = (0..=dim as u64)
        .into_par_iter()
        .map(|t| count_dilate_points(&generators, p.ambient_dim, t))
        .collect();
    // Leading coefficient times dim! equals the dim-th finite difference.
    let mut diff: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
    for _ in 0..dim {
        diff = diff.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    Ok(RationalVolume(BigRational::from_integer(diff[0].clone())))
}

/// Lattice-point counts of the dilates `t * P` for `t = 0 ..= up_to`.
pub fn ehrhart_counts(p: &LatticePointSet, up_to: u64) -> Vec<u64> {
    let generators = p.deduped();
    (0..=up_to)
        .map(|t| count_dilate_points(&generators, p.ambient_dim, t))
        .collect()
}

/// Coefficients (constant first) of the degree-`affine_dim` polynomial
/// interpolating the dilate counts, as exact rationals.
pub fn ehrhart_polynomial(p: &LatticePointSet) -> Vec<BigRational> {
    let dim = p.affine_dim();
    let counts = ehrhart_counts(p, dim as u64);
    // Solve the (dim+1)x(dim+1) Vandermonde system exactly.
    let size = dim + 1;
    let mut m: Vec<Vec<BigRational>> = (0..size)
        .map(|t| {
            let mut row: Vec<BigRational> = (0..size)
                .map(|j| BigRational::from_integer(BigInt::from(t as u64).pow(j as u32)))
                .collect();
            row.push(BigRational::from_integer(BigInt::from(counts[t])));
            row
        })
        .collect();
    for col in 0..size {
        let pivot = (col..size)
            .find(|&r| !m[r][col].is_zero())
            .expect("Vandermonde matrix is invertible");
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for c in col..=size {
            m[col][c] = &m[col][c] / &p;
        }
        for r in 0..size {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=size {
                    m[r][c] = &m[r][c] - &f * &m[col][c];
                }
            }
        }
    }
    (0..size).map(|r| m[r][size].clone()).collect()
}

/// Count `|tP ∩ Z^n|` by enumerating the sum-zero integer box with cheap
/// arithmetic filters and confirming membership with the exact simplex.
fn count_dilate_points(generators: &[Vec<i64>], n: usize, t: u64) -> u64 {
    if t == 0 {
        return 1;
    }
    let ti = t as i64;
    let lo: Vec<i64> = (0..n)
        .map(|v| generators.iter().map(|g| g[v]).min().unwrap() * ti)
        .collect();
    let hi: Vec<i64> = (0..n)
        .map(|v| generators.iter().map(|g| g[v]).max().unwrap() * ti)
        .collect();
    let mut z = vec![0i64; n];
    let mut count = 0u64;
    enumerate(generators, &lo, &hi, ti, &mut z, 0, 0, 0, &mut count);
    count
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    generators: &[Vec<i64>],
    lo: &[i64],
    hi: &[i64],
    t: i64,
    z: &mut Vec<i64>,
    depth: usize,
    sum: i64,
    l1: i64,
    count: &mut u64,
) {
    let n = lo.len();
    if depth == n - 1 {
        let last = -sum;
        if last >= lo[n - 1] && last <= hi[n - 1] && l1 + last.abs() <= 2 * t {
            z[n - 1] = last;
            if member_of_dilate(generators, z, n, t) {
                *count += 1;
            }
        }
        return;
    }
    let remaining = (n - 1 - depth) as i64;
    for value in lo[depth]..=hi[depth] {
        let sum2 = sum + value;
        let l12 = l1 + value.abs();
        if l12 > 2 * t || sum2.abs() > remaining * t {
            continue;
        }
        z[depth] = value;
        // Prefix feasibility kills whole subtrees before the leaves.
        if depth >= 1 && !member_of_dilate(generators, &z[..=depth], depth + 1, t) {
            continue;
        }
        enumerate(generators, lo, hi, t, z, depth + 1, sum2, l12, count);
    }
}

/// Is there `λ >= 0` with `Σ λ = t` matching the first `rows` coordinates?
/// With `rows == n` this is exact membership of `z` in `t * P`.
fn member_of_dilate(generators: &[Vec<i64>], z: &[i64], rows: usize, t: i64) -> bool {
    let cols = generators.len();
    let height = rows + 1;
    // Scaled tableau: generator columns, artificial identity, rhs.
    let width = cols + height + 1;
    let mut tab: Vec<i128> = vec![0; height * width];
    for r in 0..height {
        let rhs = if r < rows { z[r] as i128 } else { t as i128 };
        let sign: i128 = if rhs < 0 { -1 } else { 1 };
        for c in 0..cols {
            let coeff = if r < rows { generators[c][r] as i128 } else { 1 };
            tab[r * width + c] = sign * coeff;
        }
        tab[r * width + cols + r] = 1;
        tab[r * width + width - 1] = sign * rhs;
    }
    // Phase-1 objective: minimize the artificial sum; its row is the sum of
    // all constraint rows over the generator columns.
    let mut obj: Vec<i128> = vec![0; width];
    for c in (0..cols).chain([width - 1]) {
        obj[c] = (0..height).map(|r| tab[r * width + c]).sum();
    }

    let mut basis: Vec<usize> = (cols..cols + height).collect();
    let mut det: i128 = 1;
    loop {
        if obj[width - 1] == 0 {
            return true;
        }
        // Bland: smallest generator column with positive reduced cost.
        let Some(q) = (0..cols).find(|&c| !basis.contains(&c) && obj[c] > 0) else {
            return false;
        };
        // Ratio test, ties by smallest basis variable.
        let mut leave: Option<usize> = None;
        for r in 0..height {
            if tab[r * width + q] <= 0 {
                continue;
            }
            let better = match leave {
                None => true,
                Some(l) => {
                    let lhs = tab[r * width + width - 1] * tab[l * width + q];
                    let rhs = tab[l * width + width - 1] * tab[r * width + q];
                    lhs < rhs || (lhs == rhs && basis[r] < basis[l])
                }
            };
            if better {
                leave = Some(r);
            }
        }
        let p = leave.expect("phase-1 objective is bounded below");
        let pivot = tab[p * width + q];
        for r in 0..height {
            if r == p {
                continue;
            }
            let factor = tab[r * width + q];
            for c in 0..width {
                tab[r * width + c] = (tab[r * width + c] * pivot - factor * tab[p * width + c]) / det;
            }
        }
        let factor = obj[q];
        for c in 0..width {
            obj[c] = (obj[c] * pivot - factor * tab[p * width + c]) / det;
        }
        det = pivot;
        basis[p] = q;
    }
}

/// Product of cycle lengths: the free-sum volume of a cactus whose cycles
/// are all directed cycles. Independent of each cycle's direction.
pub fn cactus_volume(graph: &Digraph, tree: &CycleTree) -> Result<RationalVolume, PolytopeError> {
    if graph.vertex_count() < 2 || graph.arc_count() == 0 {
        return Err(PolytopeError::DegenerateGraph);
    }
    let mut volume = BigInt::one();
    for (ci, cycle) in tree.cycles.iter().enumerate() {
        let dirs: Vec<bool> = (0..cycle.len())
            .map(|slot| cycle.arc_agrees_with_traversal(graph, slot))
            .collect();
        let cyclic = dirs.iter().all(|&d| d) || dirs.iter().all(|&d| !d);
        if !cyclic {
            return Err(PolytopeError::NonCyclicCycle { cycle: ci });
        }
        volume *= BigInt::from(cycle.len());
    }
    Ok(RationalVolume(BigRational::from_integer(volume)))
}

/// The equal-volume, different-diameter pair: a chain of directed 3-cycles
/// (ending in a 4-cycle when `i` is odd) of diameter `i`, and the same chain
/// with one interior cycle reversed, which strictly lowers the diameter.
pub fn build_counterexample_pair(i: u64) -> Result<(Digraph, Digraph), PolytopeError> {
    if i < 8 {
        return Err(PolytopeError::IndexTooSmall { i });
    }
    let even = i % 2 == 0;
    let k = if even { i / 2 } else { (i - 1) / 2 } as usize;

    // Path v_0 .. v_k, then each path arc completed to a cycle by extra
    // vertices; the last becomes a 4-cycle in the odd case.
    let mut arcs: Vec<(usize, usize)> = (0..k).map(|j| (j, j + 1)).collect();
    let mut next = k + 1;
    let mut cycle_arcs: Vec<Vec<usize>> = Vec::new();
    for j in 0..k {
        let four = !even && j == k - 1;
        let mut ids = vec![j];
        if four {
            let (x, y) = (next, next + 1);
            next += 2;
            ids.push(arcs.len());
            arcs.push((j + 1, x));
            ids.push(arcs.len());
            arcs.push((x, y));
            ids.push(arcs.len());
            arcs.push((y, j));
        } else {
            let x = next;
            next += 1;
            ids.push(arcs.len());
            arcs.push((j + 1, x));
            ids.push(arcs.len());
            arcs.push((x, j));
        }
        cycle_arcs.push(ids);
    }
    let g = Digraph::new(next, arcs).expect("chain construction is always valid");
    // Reverse one interior 3-cycle (attached to two other cycles).
    let reversed = crate::digraph::ReversalSet::new(cycle_arcs[1].iter().copied());
    let h = g.reverse_arcs(&reversed).expect("cycle arcs are in range");
    Ok((g, h))
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub mask: u64,
    pub diameter: ExtendedDistance,
    pub volume: RationalVolume,
}

/// Diameter and polytope volume of every orientation of `graph` (bit `j` of
/// the mask reverses arc `j`). Antipodal orientation pairs share a volume
/// and are computed once.
pub fn orientation_sweep(
    graph: &Digraph,
    caps: VolumeCaps,
) -> Result<Vec<SweepRow>, PolytopeError> {
    let m = graph.arc_count();
    if m > 20 {
        return Err(PolytopeError::SweepTooLarge { arcs: m, cap: 20 });
    }
    if graph.vertex_count() < 2 || m == 0 {
        return Err(PolytopeError::DegenerateGraph);
    }
    let full = (1u64 << m) - 1;
    let canon = |mask: u64| mask.min(mask ^ full);
    let mut reps: Vec<u64> = (0..=full).map(canon).collect();
    reps.sort_unstable();
    reps.dedup();

    let volumes: Vec<(u64, RationalVolume)> = reps
        .into_par_iter()
        .map(|mask| {
            let oriented = orient(graph, mask);
            let p = directed_edge_polytope(&oriented)?;
            Ok((mask, normalized_volume_with_caps(&p, caps)?))
        })
        .collect::<Result<_, PolytopeError>>()?;
    let by_rep: std::collections::HashMap<u64, RationalVolume> = volumes.into_iter().collect();

    Ok((0..=full)
        .into_par_iter()
        .map(|mask| SweepRow {
            mask,
            diameter: orient(graph, mask).diameter(),
            volume: by_rep[&canon(mask)].clone(),
        })
        .collect())
}

fn orient(graph: &Digraph, mask: u64) -> Digraph {
    let reversed: Vec<bool> = (0..graph.arc_count()).map(|i| mask >> i & 1 == 1).collect();
    graph.with_reversed_flags(&reversed)
}
