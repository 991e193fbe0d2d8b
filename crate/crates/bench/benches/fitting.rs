use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use chiral_cqed::fitting::{fit_spectrum, synth_spectrum, SpectrumFit};

fn fit(c: &mut Criterion) {
    let truth = SpectrumFit::lineshape((3.0, -3.0), (1.2, 0.9), 30.0, 300.0);
    let grid: Vec<f64> = (0..401).map(|i| -10.0 + 0.05 * i as f64).collect();
    let clean = synth_spectrum(&truth, &grid, 0.0, 0).unwrap();
    let noisy = synth_spectrum(&truth, &grid, 1e-3, 1).unwrap();
    c.bench_function("fit/noiseless_401", |b| b.iter(|| fit_spectrum(black_box(&clean), None).unwrap()));
    c.bench_function("fit/noisy_401", |b| b.iter(|| fit_spectrum(black_box(&noisy), None).unwrap()));
}

criterion_group!(benches, fit);
criterion_main!(benches);
