use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use chiral_cqed::model::build_model;
use chiral_cqed::steadystate::{build_liouvillian, solve_steady_state};
use chiral_cqed::{ModelKind, SystemParams};

fn params(cutoff: usize, model: ModelKind) -> SystemParams {
    SystemParams {
        fock_cutoff: cutoff,
        model,
        ..SystemParams::default()
    }
}

fn liouvillian(c: &mut Criterion) {
    let mut group = c.benchmark_group("liouvillian");
    for cutoff in [2, 4] {
        let model = build_model(&params(cutoff, ModelKind::Full)).unwrap();
        group.bench_with_input(BenchmarkId::new("full", cutoff), &model, |b, m| {
            b.iter(|| build_liouvillian(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn steady_state(c: &mut Criterion) {
    let mut group = c.benchmark_group("steady_state");
    group.sample_size(10);
    for (label, cutoff, kind) in [
        ("reduced", 4, ModelKind::Reduced),
        ("full", 2, ModelKind::Full),
        ("full", 4, ModelKind::Full),
    ] {
        let liou = build_liouvillian(&build_model(&params(cutoff, kind)).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new(label, cutoff), &liou, |b, l| {
            b.iter(|| solve_steady_state(black_box(l)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, liouvillian, steady_state);
criterion_main!(benches);
