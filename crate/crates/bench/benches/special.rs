use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hv_core::{gauss_2f1, humbert_xi2, SeriesControl};

fn special(c: &mut Criterion) {
    let ctrl = SeriesControl::default();
    c.bench_function("xi2 near origin", |b| {
        b.iter(|| humbert_xi2(black_box(0.25), 0.75, 1.3, black_box(-0.4), 0.2, &ctrl))
    });
    c.bench_function("xi2 large negative u", |b| {
        b.iter(|| humbert_xi2(black_box(-0.1), 1.1, 0.7, black_box(-40.0), 2.5, &ctrl))
    });
    c.bench_function("2f1 connection", |b| b.iter(|| gauss_2f1(0.3, 1.7, 2.2, black_box(-7.5), &ctrl)));
    c.bench_function("2f1 near one", |b| b.iter(|| gauss_2f1(0.3, 1.7, 2.2, black_box(0.97), &ctrl)));
}

criterion_group!(benches, special);
criterion_main!(benches);
