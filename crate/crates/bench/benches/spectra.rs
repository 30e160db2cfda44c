use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jacobi_bench::{chebyshev_jfraction, krein_unit, linear_sfraction, lommel, natvig, section, SIZES};
use jacobi_core::{eigen_tridiag, j_convergent, krein_gj_decay, s_convergent, spectrum_sweep, Complex64, SweepOptions};

fn eigensolver(c: &mut Criterion) {
    let seq = lommel();
    let mut group = c.benchmark_group("eigen_tridiag");
    for n in SIZES {
        let t = section(&seq, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| b.iter(|| eigen_tridiag(black_box(t)).unwrap()));
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let seq = natvig();
    let mut group = c.benchmark_group("spectrum_sweep");
    group.sample_size(10);
    for n in [200, 400] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| spectrum_sweep(&seq, &[n / 2, n], SweepOptions::with_tol(1e-8)).unwrap())
        });
    }
    group.finish();
}

fn convergents(c: &mut Criterion) {
    let s = linear_sfraction();
    let j = chebyshev_jfraction();
    let t = Complex64::new(0.5, 0.25);
    let z = Complex64::new(0.3, 0.1);
    let mut group = c.benchmark_group("convergents");
    for n in [100, 10_000] {
        group.bench_with_input(BenchmarkId::new("s", n), &n, |b, &n| b.iter(|| s_convergent(&s, black_box(t), n)));
        group.bench_with_input(BenchmarkId::new("j", n), &n, |b, &n| b.iter(|| j_convergent(&j, black_box(z), n)));
    }
    group.finish();
}

fn krein(c: &mut Criterion) {
    let seq = lommel();
    let g = krein_unit();
    c.bench_function("krein_gj_decay/1000", |b| b.iter(|| krein_gj_decay(&seq, &g, 1000, 1e-6).unwrap()));
}

criterion_group!(benches, eigensolver, sweep, convergents, krein);
criterion_main!(benches);
