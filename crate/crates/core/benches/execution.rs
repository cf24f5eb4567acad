use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use parsubmod::objectives::random::{cut_edges, uniform_costs};
use parsubmod::seed::stream;
use parsubmod::*;

fn instance(n: usize) -> (CutFunction, CostModel) {
    let mut rng = stream(7, &[]);
    let f = CutFunction::new(n, &cut_edges(n, 8.0 / n as f64, &mut rng)).unwrap();
    let costs = uniform_costs(n, 0.1, 1.0, &mut rng);
    let budget = 0.1 * costs.iter().sum::<f64>();
    (f, CostModel::new(costs, budget).unwrap())
}

fn probes(c: &mut Criterion) {
    let mut group = c.benchmark_group("probe_round");
    for n in [200, 800] {
        let (f, _) = instance(n);
        let batch: Vec<Probe> = (0..64)
            .map(|i| {
                let base = ElementSet::from_ids(n, (0..n as u32).filter(|u| (u + i) % 5 == 0)).unwrap();
                Probe::new(base, (0..n as u32).collect())
            })
            .collect();
        for execution in [Execution::Sequential, Execution::Parallel] {
            group.bench_with_input(BenchmarkId::new(format!("{execution:?}"), n), &batch, |b, batch| {
                b.iter(|| {
                    let mut t = Tracker::new(execution);
                    black_box(t.submit_probes(&f, batch))
                })
            });
        }
    }
    group.finish();
}

fn par_skp_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("par_skp");
    group.sample_size(10);
    let n = 200;
    let (f, model) = instance(n);
    let config = SkpConfig {
        epsilon: 0.5,
        ..SkpConfig::default()
    };
    for execution in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(BenchmarkId::new(format!("{execution:?}"), n), |b| {
            b.iter(|| {
                let mut t = Tracker::new(execution);
                black_box(par_skp(&config, &f, &model, &RandomSubset, &mut t).unwrap())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, probes, par_skp_modes);
criterion_main!(benches);
