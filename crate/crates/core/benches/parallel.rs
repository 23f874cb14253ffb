use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use exclusivity::bounds::bounds_many;
use exclusivity::sets::is_perfect;
use exclusivity::{Execution, Graph, Settings};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graphs(count: usize, n: usize) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..count)
        .map(|_| {
            let edges: Vec<_> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|_| rng.random_bool(0.5))
                .collect();
            Graph::from_edge_list(n, &edges, None).unwrap()
        })
        .collect()
}

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn batch_bounds(c: &mut Criterion) {
    let graphs = random_graphs(32, 10);
    let settings = Settings::default();
    let mut group = c.benchmark_group("bounds_many");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| bounds_many(&graphs, &settings, exec))
        });
    }
    group.finish();
}

fn hole_search(c: &mut Criterion) {
    // bipartite, so every odd subset is scanned
    let g = Graph::cycle(16).unwrap();
    let settings = Settings::default();
    let mut group = c.benchmark_group("is_perfect");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| is_perfect(&g, &settings, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, batch_bounds, hole_search);
criterion_main!(benches);
