use criterion::{criterion_group, criterion_main, Criterion};
use crossratio_bench::{gram_306, points};
use crossratio_core::chowrings::{inv_ring, riemann_roch};
use crossratio_core::exactmath::int_rank;
use crossratio_core::orthgroup::reflection_group;
use crossratio_core::toricfan::build_weyl_fan;

fn group_closure(c: &mut Criterion) {
    let sets = points();
    let mut g = c.benchmark_group("group");
    g.sample_size(10);
    g.bench_function("reflection closure", |b| b.iter(|| reflection_group(&sets).order()));
    g.finish();
}

fn bareiss_306(c: &mut Criterion) {
    let m = gram_306();
    let mut g = c.benchmark_group("gram");
    g.sample_size(10);
    g.bench_function("rank 306", |b| b.iter(|| int_rank(&m)));
    g.finish();
}

fn weyl_fan(c: &mut Criterion) {
    c.bench_function("weyl fan", |b| b.iter(|| build_weyl_fan().unwrap().fan().max_cones().len()));
}

fn rings(c: &mut Criterion) {
    c.bench_function("riemann-roch", |b| b.iter(|| riemann_roch(&inv_ring()).unwrap()));
}

criterion_group!(benches, group_closure, bareiss_306, weyl_fan, rings);
criterion_main!(benches);
