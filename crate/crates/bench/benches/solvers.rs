use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use revdiam_bench::{random_cactus_chain, random_digraph};
use revdiam_core::cactus_solver::solve_cactus;
use revdiam_core::solver::{oracle_min_reversals, solve_k_reversals, CostMode, SolveBudget};

fn bench_brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force");
    for m in [8usize, 10, 12] {
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        let g = random_digraph(&mut rng, 6, m);
        group.bench_with_input(BenchmarkId::from_parameter(m), &g, |b, g| {
            b.iter(|| solve_k_reversals(g, &SolveBudget::cardinality(3, m as u64)).unwrap())
        });
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = random_digraph(&mut rng, 6, 12);
    c.bench_function("oracle_2_to_the_12", |b| {
        b.iter(|| oracle_min_reversals(&g, 3, CostMode::Cardinality).unwrap())
    });
}

fn bench_cactus_dp(c: &mut Criterion) {
    let mut group = c.benchmark_group("cactus_dp");
    for cycles in [4usize, 8, 16] {
        let mut rng = ChaCha8Rng::seed_from_u64(cycles as u64);
        let g = random_cactus_chain(&mut rng, cycles, 4);
        let w = g.total_weight();
        group.bench_with_input(BenchmarkId::from_parameter(cycles), &g, |b, g| {
            b.iter(|| solve_cactus(g, w / 2, w, CostMode::Cardinality).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_brute_force, bench_oracle, bench_cactus_dp);
criterion_main!(benches);
