use criterion::{criterion_group, criterion_main, Criterion};
use prank_core::fermat::{self, BasisChoice};
use prank_core::planecurve;
use std::hint::black_box;

fn plane(c: &mut Criterion) {
    let sextic = prank_bench::sextic();
    c.bench_function("sextic hasse-witt", |b| b.iter(|| planecurve::hasse_witt(black_box(&sextic))));
    let hw = planecurve::hasse_witt(&sextic);
    c.bench_function("sextic stable rank", |b| b.iter(|| black_box(&hw).stable_rank()));
    c.bench_function("sextic cartier-manin", |b| b.iter(|| planecurve::cartier_manin(black_box(&sextic), 2)));
}

fn fermat_curves(c: &mut Criterion) {
    let spec = prank_bench::fermat_3_4();
    let mut g = c.benchmark_group("fermat (3,4)");
    g.sample_size(10);
    g.bench_function("kernel basis", |b| b.iter(|| fermat::kernel_basis(black_box(&spec))));
    g.bench_function("frobenius, kernel basis", |b| {
        b.iter(|| fermat::frobenius_matrix(black_box(&spec), BasisChoice::Kernel))
    });
    g.bench_function("frobenius, explicit basis", |b| {
        b.iter(|| fermat::frobenius_matrix(black_box(&spec), BasisChoice::Explicit))
    });
    g.finish();
}

criterion_group!(benches, plane, fermat_curves);
criterion_main!(benches);
