use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hypstab_core::complex::{
    build_cover, cell_counts, fundamental_cycle, links, subgroups_of_index, torus_cover_spec, verify_cycle,
    x_characteristic,
};
use hypstab_core::Fixture;

fn counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("cell_counts");
    for f in [Fixture::Torus, Fixture::Boundary4Simplex, Fixture::FigureEight] {
        let t = f.triangulation();
        g.bench_with_input(BenchmarkId::from_parameter(f.name()), &t, |b, t| b.iter(|| cell_counts(black_box(t))));
    }
    g.finish();
    let fe = Fixture::FigureEight.triangulation();
    c.bench_function("links/figure-eight", |b| b.iter(|| links(black_box(&fe))));
}

fn cycles(c: &mut Criterion) {
    let mut g = c.benchmark_group("fundamental_cycle");
    for f in [Fixture::Torus, Fixture::Boundary4Simplex] {
        let t = f.triangulation();
        g.bench_with_input(BenchmarkId::from_parameter(f.name()), &t, |b, t| {
            b.iter(|| {
                let z = fundamental_cycle(black_box(t)).unwrap();
                verify_cycle(t, &z)
            })
        });
    }
    g.finish();
}

fn covers(c: &mut Criterion) {
    let torus = Fixture::Torus.triangulation();
    let mut g = c.benchmark_group("characteristic_cover");
    for x in [2i64, 4, 8] {
        let spec = torus_cover_spec(&x_characteristic(x).unwrap());
        g.bench_with_input(BenchmarkId::from_parameter(x), &spec, |b, s| b.iter(|| build_cover(&torus, black_box(s))));
    }
    g.finish();
    c.bench_function("subgroups_of_index/1..=12", |b| {
        b.iter(|| (1..=12).map(|m| subgroups_of_index(black_box(m)).len()).sum::<usize>())
    });
}

criterion_group!(benches, counts, cycles, covers);
criterion_main!(benches);
