use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use energysched_bench::fixture;
use energysched_core::datagen::{preset_nosby, preset_twosby};
use energysched_core::{build_graph, compute_spaces, solve_exact, SpacesTable};

fn graph(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_graph");
    for n in [30, 90, 190] {
        let inst = fixture(&preset_twosby(), n, 1);
        group.bench_with_input(
            BenchmarkId::from_parameter(inst.horizon()),
            &inst,
            |b, inst| b.iter(|| build_graph(inst).unwrap()),
        );
    }
    group.finish();
}

fn spaces(c: &mut Criterion) {
    let mut group = c.benchmark_group("compute_spaces");
    group.sample_size(10);
    for n in [30, 90] {
        let inst = fixture(&preset_twosby(), n, 1);
        let g = build_graph(&inst).unwrap();
        for threads in [1, 4] {
            group.bench_with_input(
                BenchmarkId::new(format!("h{}", inst.horizon()), threads),
                &threads,
                |b, &t| b.iter(|| compute_spaces(&g, t).unwrap()),
            );
        }
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_exact");
    group.sample_size(10);
    for n in [10, 20, 30] {
        let inst = fixture(&preset_nosby(), n, 7);
        let table = SpacesTable::for_instance(&inst, 1)
            .unwrap()
            .apply_pruning(&inst);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| solve_exact(&inst, &table).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, graph, spaces, solve);
criterion_main!(benches);
